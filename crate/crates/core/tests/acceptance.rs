//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::Instant;

use pregroupoid::document::{save, Structure};
use pregroupoid::envelope::{Envelope, EnvelopeOptions};
use pregroupoid::fibration::{
    bitorsor_to_fibration, canonical_roundtrip_iso, collapse_to_i, conjugation_samples, decode_two_cell,
    encode_two_cell, fibration_to_bitorsor, terminal_in_i, FibrationOverI, TwoCell,
};
use pregroupoid::generators::{
    bijection_pregroup_n, cyclic_group, enumerate_pregroupoids, pair_groupoid, pair_pregroupoid_n, product_groupoid,
    random_groupoid, standard_corpus, symmetric_group,
};
use pregroupoid::torsor::{
    ad, ad_right, c_left, cyclic_identity, env_to_bitorsor, forget_left, forget_right, left_torsor_iso,
    right_torsor_iso, roundtrip_iso_left, roundtrip_iso_right, square_commutes, LeftTorsor, RightTorsor,
    TorsorIsomorphism,
};
use pregroupoid::{FiniteGroupoid, GroupoidFunctor, Pregroupoid, PregroupoidMorphism};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus_pregroupoids() -> Vec<(String, Pregroupoid)> {
    let c = standard_corpus();
    let mut all = c.pregroupoids;
    for (name, t) in &c.torsors {
        all.push((format!("c-left {name}"), c_left(t).expect("corpus torsor")));
    }
    all
}

fn corpus_torsors() -> Vec<(String, LeftTorsor)> {
    let mut all = standard_corpus().torsors;
    for (name, p) in standard_corpus().pregroupoids {
        let bi = env_to_bitorsor(&p).expect("corpus pregroupoid");
        all.push((format!("envelope {name}"), forget_right(&bi)));
    }
    all
}

/// The unit, concatenation and book-keeping laws, checked directly on the
/// ternary table.
fn axioms_hold(p: &Pregroupoid) -> Result<(), String> {
    let xs: Vec<usize> = p.carrier().indices().collect();
    let t = |y: usize, x: usize, z: usize| p.ternary(y, x, z);
    for &y in &xs {
        for &x in &xs {
            for &z in &xs {
                let defined = p.beta(x) == p.beta(y) && p.alpha(x) == p.alpha(z);
                ensure!(t(y, x, z).is_some() == defined, "definedness at ({y},{x},{z})");
                if let Some(u) = t(y, x, z) {
                    ensure!(
                        p.alpha(u) == p.alpha(y) && p.beta(u) == p.beta(z),
                        "book-keeping at ({y},{x},{z})"
                    );
                }
            }
        }
    }
    for &x in &xs {
        for &z in &xs {
            if p.alpha(x) == p.alpha(z) {
                ensure!(t(x, x, z) == Some(z), "xx^-1z = z fails at ({x},{z})");
            }
            if p.beta(x) == p.beta(z) {
                ensure!(t(z, x, x) == Some(z), "yx^-1x = y fails at ({z},{x})");
            }
        }
    }
    for &v in &xs {
        for &y in &xs {
            for &x in &xs {
                for &z in &xs {
                    if let (Some(inner), true) = (t(y, x, z), p.beta(v) == p.beta(y)) {
                        ensure!(t(v, y, inner) == t(v, x, z), "vy^-1(yx^-1z) = vx^-1z fails");
                    }
                    if let Some(inner) = t(y, x, z) {
                        for &w in &xs {
                            if p.alpha(z) == p.alpha(w) {
                                ensure!(t(inner, z, w) == t(y, x, w), "(yx^-1z)z^-1w = yx^-1w fails");
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Groupoid laws, checked directly on the composition table.
fn groupoid_laws_hold(g: &FiniteGroupoid) -> Result<usize, String> {
    let n = g.arrow_count();
    let mut triples = 0;
    for f in 0..n {
        let (i0, i1) = (g.identity(g.d0(f)), g.identity(g.d1(f)));
        ensure!(
            g.compose(i0, f) == Some(f) && g.compose(f, i1) == Some(f),
            "unit law at {f}"
        );
        let inv = g.inverse(f);
        ensure!(
            g.compose(f, inv) == Some(i0) && g.compose(inv, f) == Some(i1),
            "inverse law at {f}"
        );
        for h in 0..n {
            let fh = g.compose(f, h);
            ensure!(fh.is_some() == (g.d1(f) == g.d0(h)), "composability of ({f},{h})");
            if let Some(fh) = fh {
                ensure!(g.d0(fh) == g.d0(f) && g.d1(fh) == g.d1(h), "ends of {f}∘{h}");
                for k in (0..n).filter(|&k| g.d0(k) == g.d1(h)) {
                    triples += 1;
                    ensure!(
                        g.compose(fh, k) == g.compose(f, g.compose(h, k).unwrap()),
                        "associativity at ({f},{h},{k})"
                    );
                }
            }
        }
    }
    Ok(triples)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let c = standard_corpus();
    let mut checked = 0;
    for (name, p) in &c.pregroupoids {
        axioms_hold(p).map_err(|e| format!("{name}: {e}"))?;
        ensure!(p.validate().is_clean(), "{name}: validator reports violations");
        ensure!(
            p.verify_derived_equations().is_clean(),
            "{name}: derived equations fail"
        );
        checked += 1;
    }
    for (name, t) in &c.torsors {
        ensure!(t.validate().is_clean(), "{name}: torsor validator reports violations");
        let p = c_left(t).map_err(|e| format!("{name}: {e}"))?;
        axioms_hold(&p).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            p.verify_derived_equations().is_clean(),
            "{name}: derived equations fail"
        );
        checked += 1;
    }
    let small = enumerate_pregroupoids(3, 3, 3).len();
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!(
        "{checked} structures ({small} enumerated with |X| <= 3) in {secs:.2}s"
    ))
}

fn criterion_2() -> Outcome {
    let mut triples = 0;
    let all = corpus_pregroupoids();
    for (name, p) in &all {
        let e = Envelope::build(p, EnvelopeOptions { strict: true }).map_err(|e| format!("{name}: {e}"))?;
        let g = e.groupoid();
        ensure!(g.validate().is_clean(), "{name}: groupoid validator reports violations");
        triples += groupoid_laws_hold(g).map_err(|e| format!("{name}: {e}"))?;
        let c = e.counts();
        ensure!(
            c.ab == p.size() && c.ba == p.size(),
            "{name}: X and X^-1 blocks have the wrong size"
        );
        ensure!(
            c.aa == p.horizontal_quotient().len() && c.bb == p.vertical_quotient().len(),
            "{name}: edge blocks differ from the quotients"
        );
    }
    Ok(format!("{} envelopes, {triples} composable triples", all.len()))
}

/// Every functor `X+ -> G` extending `phi` is forced on each arrow by a
/// word in `eta`-images; `extended` must agree with every such word.
fn forced_by_words(
    e: &Envelope,
    g: &FiniteGroupoid,
    phi: &PregroupoidMorphism,
    extended: &GroupoidFunctor,
) -> Result<(), String> {
    let env = e.groupoid();
    let eta = e.eta();
    let ab = |x: usize| eta.target().carrier().label(eta.map_x(x)).to_string();
    let in_env = |x: usize| env.arrows().index_of(&ab(x)).expect("eta lands in X+");
    let in_g = |x: usize| {
        g.arrows()
            .index_of(phi.target().carrier().label(phi.map_x(x)))
            .expect("phi lands in G")
    };
    let xs: Vec<usize> = e.base().carrier().indices().collect();
    let mut forced = vec![None; env.arrow_count()];
    let mut record = |f: usize, value: usize| -> Result<(), String> {
        match forced[f] {
            Some(v) if v != value => Err(format!("two words for {} disagree", env.arrows().label(f))),
            _ => {
                forced[f] = Some(value);
                Ok(())
            }
        }
    };
    for &x in &xs {
        record(in_env(x), in_g(x))?;
        record(env.inverse(in_env(x)), g.inverse(in_g(x)))?;
        for &y in &xs {
            if let Some(f) = env.compose(in_env(y), env.inverse(in_env(x))) {
                record(
                    f,
                    g.compose(in_g(y), g.inverse(in_g(x)))
                        .ok_or("phi breaks book-keeping")?,
                )?;
            }
            if let Some(f) = env.compose(env.inverse(in_env(x)), in_env(y)) {
                record(
                    f,
                    g.compose(g.inverse(in_g(x)), in_g(y))
                        .ok_or("phi breaks book-keeping")?,
                )?;
            }
        }
    }
    for f in env.arrows().indices() {
        let v = forced[f].ok_or_else(|| format!("{} is not generated by X", env.arrows().label(f)))?;
        ensure!(
            extended.map_arrow(f) == v,
            "extension differs from the forced value at {}",
            env.arrows().label(f)
        );
    }
    Ok(())
}

fn adjunction_triple(p: &Pregroupoid, g: &FiniteGroupoid, phi: &PregroupoidMorphism) -> Result<(), String> {
    let e = Envelope::build(p, EnvelopeOptions::default()).map_err(|e| e.to_string())?;
    let eta = e.eta();
    let mut seen = vec![false; eta.target().size()];
    for x in p.carrier().indices() {
        ensure!(
            !std::mem::replace(&mut seen[eta.map_x(x)], true),
            "eta is not injective"
        );
    }
    let env = e.groupoid();
    let label = |x: usize| {
        env.arrows()
            .index_of(eta.target().carrier().label(eta.map_x(x)))
            .unwrap()
    };
    for (y, x, z, u) in p.table().defined() {
        let w = env.compose(env.compose(label(y), env.inverse(label(x))).unwrap(), label(z));
        ensure!(w == Some(label(u)), "eta does not preserve the ternary operation");
    }
    let extended = e.extend(g, phi).map_err(|e| e.to_string())?;
    for x in p.carrier().indices() {
        let image = extended.map_arrow(label(x));
        ensure!(
            g.arrows().label(image) == phi.target().carrier().label(phi.map_x(x)),
            "extension composed with eta differs from phi"
        );
    }
    forced_by_words(&e, g, phi, &extended)
}

fn criterion_3() -> Outcome {
    let mut triples: Vec<(String, Pregroupoid, FiniteGroupoid, PregroupoidMorphism)> = Vec::new();
    for (name, p) in corpus_pregroupoids()
        .into_iter()
        .filter(|(_, p)| p.size() <= 6)
        .take(12)
    {
        let e = Envelope::build(&p, EnvelopeOptions::default()).unwrap();
        triples.push((format!("eta {name}"), p.clone(), e.groupoid().clone(), e.eta()));
        let i = pregroupoid::fibration::make_i();
        let phi = PregroupoidMorphism::to_terminal(&p, &terminal_in_i()).unwrap();
        triples.push((format!("terminal {name}"), p, i, phi));
    }
    for seed in 0..12 {
        let (g, a, b) = random_groupoid(seed);
        let whole = g.underlying_pregroupoid(&a, &b).unwrap();
        triples.push((
            format!("identity random:{seed}"),
            whole.clone(),
            g.clone(),
            PregroupoidMorphism::identity(&whole),
        ));
        for (&a0, &b0) in a.iter().zip(&b) {
            let Ok(sub) = g.underlying_pregroupoid(&[a0], &[b0]) else {
                continue;
            };
            let carrier = sub
                .carrier()
                .labels()
                .iter()
                .map(|l| whole.carrier().index_of(l).unwrap())
                .collect();
            let a_map = vec![a.iter().position(|&o| o == a0).unwrap()];
            let b_map = vec![b.iter().position(|&o| o == b0).unwrap()];
            let phi = PregroupoidMorphism::new(sub.clone(), whole.clone(), carrier, a_map, b_map).unwrap();
            triples.push((format!("inclusion random:{seed}"), sub, g.clone(), phi));
            break;
        }
    }
    ensure!(triples.len() >= 20, "only {} triples", triples.len());
    for (name, p, g, phi) in &triples {
        ensure!(phi.validate().is_clean(), "{name}: morphism invalid");
        adjunction_triple(p, g, phi).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} triples", triples.len()))
}

fn criterion_4() -> Outcome {
    let all = corpus_pregroupoids();
    for (name, p) in &all {
        let bi = env_to_bitorsor(p).map_err(|e| format!("{name}: {e}"))?;
        square_commutes(&bi).map_err(|e| format!("{name}: square: {e}"))?;
        cyclic_identity(p).map_err(|e| format!("{name}: cyclic: {e}"))?;
        let rebuilt = c_left(&forget_right(&bi)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(&rebuilt == p, "{name}: rebuilt pregroupoid is not label-identical");
        for x in p.carrier().indices() {
            ensure!(
                rebuilt.carrier().label(x) == p.carrier().label(x)
                    && rebuilt.a().label(rebuilt.alpha(x)) == p.a().label(p.alpha(x))
                    && rebuilt.b().label(rebuilt.beta(x)) == p.b().label(p.beta(x)),
                "{name}: labels moved"
            );
        }
    }
    Ok(format!("{} members, label-exact", all.len()))
}

fn left_iso_is_action_compatible(s: &LeftTorsor, t: &LeftTorsor, iso: &TorsorIsomorphism) -> Result<(), String> {
    ensure!(
        iso.forward.validate().is_clean() && iso.inverse.validate().is_clean(),
        "functors invalid"
    );
    ensure!(
        iso.forward.then(&iso.inverse).unwrap() == GroupoidFunctor::identity(s.group()),
        "inverse is not inverse"
    );
    for g in s.group().arrows().indices() {
        for x in s.carrier().indices() {
            let image = s.action().act(g, x).map(|y| iso.carrier_map[y]);
            ensure!(
                image == t.action().act(iso.forward.map_arrow(g), iso.carrier_map[x]),
                "action not preserved at ({g},{x})"
            );
        }
    }
    Ok(())
}

fn right_iso_is_action_compatible(s: &RightTorsor, t: &RightTorsor, iso: &TorsorIsomorphism) -> Result<(), String> {
    ensure!(
        iso.forward.validate().is_clean() && iso.inverse.validate().is_clean(),
        "functors invalid"
    );
    ensure!(
        iso.forward.then(&iso.inverse).unwrap() == GroupoidFunctor::identity(s.group()),
        "inverse is not inverse"
    );
    for h in s.group().arrows().indices() {
        for x in s.carrier().indices() {
            let image = s.action().act(x, h).map(|y| iso.carrier_map[y]);
            ensure!(
                image == t.action().act(iso.carrier_map[x], iso.forward.map_arrow(h)),
                "action not preserved at ({x},{h})"
            );
        }
    }
    Ok(())
}

fn rebuilt_left(t: &LeftTorsor) -> LeftTorsor {
    forget_right(&env_to_bitorsor(&c_left(t).unwrap()).unwrap())
}

fn criterion_5() -> Outcome {
    let all = corpus_torsors();
    for (name, t) in &all {
        let iso = roundtrip_iso_left(t).map_err(|e| format!("{name}: {e}"))?;
        left_iso_is_action_compatible(t, &rebuilt_left(t), &iso).map_err(|e| format!("{name}: left: {e}"))?;

        let r = ad(t).map_err(|e| format!("{name}: {e}"))?;
        let iso = roundtrip_iso_right(&r).map_err(|e| format!("{name}: {e}"))?;
        let rebuilt = forget_left(&env_to_bitorsor(&pregroupoid::torsor::c_right(&r).unwrap()).unwrap());
        right_iso_is_action_compatible(&r, &rebuilt, &iso).map_err(|e| format!("{name}: right: {e}"))?;

        let back = ad_right(&r).map_err(|e| format!("{name}: {e}"))?;
        let iso = left_torsor_iso(&back, t).map_err(|e| format!("{name}: ad-ad: {e}"))?;
        left_iso_is_action_compatible(&back, t, &iso).map_err(|e| format!("{name}: ad-ad: {e}"))?;
        let r_back = ad(&back).map_err(|e| format!("{name}: {e}"))?;
        let iso = right_torsor_iso(&r_back, &r).map_err(|e| format!("{name}: ad-ad right: {e}"))?;
        right_iso_is_action_compatible(&r_back, &r, &iso).map_err(|e| format!("{name}: ad-ad right: {e}"))?;
    }
    Ok(format!("{} torsors, both sides, ad∘ad verified", all.len()))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn commuting_pairs(g: &FiniteGroupoid) -> (usize, usize) {
    let n = g.arrow_count();
    let commuting = (0..n)
        .flat_map(|f| (0..n).map(move |h| (f, h)))
        .filter(|&(f, h)| g.compose(f, h) == g.compose(h, f))
        .count();
    (commuting, n * n)
}

fn criterion_6() -> Outcome {
    let p = bijection_pregroup_n(3).map_err(|e| e.to_string())?;
    ensure!(p.size() == factorial(3), "bijection pregroup has {} elements", p.size());
    let e = Envelope::build(&p, EnvelopeOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        e.groupoid().arrow_count() == 24,
        "envelope has {} arrows",
        e.groupoid().arrow_count()
    );
    ensure!(e.counts().total() == 24, "block counts disagree");
    let (ea, eb) = e.edge_groupoids();
    for (side, g) in [("A", &ea), ("B", &eb)] {
        ensure!(
            g.objects().len() == 1 && g.arrow_count() == 6,
            "{side}-edge is not a group of order 6"
        );
        let (commuting, all) = commuting_pairs(g);
        ensure!(commuting < all, "{side}-edge is abelian");
        ensure!(!g.is_abelian(), "{side}-edge reported abelian");
    }
    let q = pair_pregroupoid_n(2, 2).map_err(|e| e.to_string())?;
    let eq = Envelope::build(&q, EnvelopeOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        eq.groupoid().arrow_count() == 16,
        "pair (2,2) envelope has {} arrows",
        eq.groupoid().arrow_count()
    );
    Ok("|X| = 6, 24 arrows, two nonabelian edge groups of order 6, pair (2,2) has 16".into())
}

fn fibration_roundtrip_ok(f: &FibrationOverI) -> Result<(), String> {
    let iso = canonical_roundtrip_iso(f).map_err(|e| e.to_string())?;
    ensure!(iso.forward.validate().is_clean(), "forward functor invalid");
    ensure!(iso.forward.is_bijective(), "forward functor not bijective");
    ensure!(
        iso.forward.then(&iso.inverse).unwrap() == GroupoidFunctor::identity(iso.rebuilt.total()),
        "inverse is not inverse"
    );
    for a in iso.rebuilt.total().arrows().indices() {
        ensure!(
            f.gamma().map_arrow(iso.forward.map_arrow(a)) == iso.rebuilt.gamma().map_arrow(a),
            "isomorphism is not over I"
        );
    }
    let (pa, pb) = f.end_inclusion_properties().map_err(|e| e.to_string())?;
    ensure!(
        pa.full && pa.faithful && pa.essentially_surjective,
        "A-end inclusion: {pa:?}"
    );
    ensure!(
        pb.full && pb.faithful && pb.essentially_surjective,
        "B-end inclusion: {pb:?}"
    );
    let bi = fibration_to_bitorsor(f).map_err(|e| e.to_string())?;
    ensure!(bi.validate().is_clean(), "bitorsor of the fibration is invalid");
    let back = bitorsor_to_fibration(&bi).map_err(|e| e.to_string())?;
    let bi2 = fibration_to_bitorsor(&back).map_err(|e| e.to_string())?;
    // The rebuilt ends carry the envelope's object labels, in the same order.
    let (l, r) = (bi.left(), bi.right());
    let l2 = bi2
        .left()
        .relabel_ends(l.a().clone(), l.b().clone())
        .map_err(|e| e.to_string())?;
    let r2 = bi2
        .right()
        .relabel_ends(r.a().clone(), r.b().clone())
        .map_err(|e| e.to_string())?;
    let iso = left_torsor_iso(&l2, l).map_err(|e| format!("bitorsor roundtrip: {e}"))?;
    left_iso_is_action_compatible(&l2, l, &iso).map_err(|e| format!("bitorsor roundtrip: {e}"))?;
    let iso = right_torsor_iso(&r2, r).map_err(|e| format!("bitorsor roundtrip: {e}"))?;
    right_iso_is_action_compatible(&r2, r, &iso).map_err(|e| format!("bitorsor roundtrip: {e}"))?;
    Ok(())
}

/// Fibrations not built from an envelope: `pair(n) x group`, split into
/// the first `k` objects and the rest.
fn product_fibrations() -> Vec<(String, FibrationOverI)> {
    let mut out = Vec::new();
    let groups = [
        ("C1", cyclic_group(1).unwrap()),
        ("C2", cyclic_group(2).unwrap()),
        ("C3", cyclic_group(3).unwrap()),
        ("S3", symmetric_group(3).unwrap()),
    ];
    for n in 2..=3 {
        for (gname, group) in &groups {
            let objects = pregroupoid::FiniteSet::numbered("o", n);
            let total = product_groupoid(&pair_groupoid(&objects).unwrap(), group).unwrap();
            for k in 1..n {
                let a: Vec<usize> = (0..k).collect();
                let f = FibrationOverI::new(collapse_to_i(&total, &a).unwrap()).unwrap();
                out.push((format!("pair:{n} x {gname} split {k}"), f));
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (name, p) in corpus_pregroupoids() {
        let bi = env_to_bitorsor(&p).map_err(|e| format!("{name}: {e}"))?;
        let f = bitorsor_to_fibration(&bi).map_err(|e| format!("{name}: {e}"))?;
        ensure!(f.validate().is_clean(), "{name}: fibration invalid");
        fibration_roundtrip_ok(&f).map_err(|e| format!("{name}: {e}"))?;
        count += 1;
    }
    for (name, f) in product_fibrations() {
        ensure!(f.validate().is_clean(), "{name}: fibration invalid");
        fibration_roundtrip_ok(&f).map_err(|e| format!("{name}: {e}"))?;
        count += 1;
    }
    Ok(format!(
        "{count} fibrations, isomorphic over I, end inclusions are equivalences"
    ))
}

fn natural(cell: &TwoCell) -> bool {
    let src = cell.from().source().total();
    let tgt = cell.from().target().total();
    let (f, g) = (cell.from().functor(), cell.to().functor());
    src.arrows().indices().all(|k| {
        tgt.compose(f.map_arrow(k), cell.components()[src.d1(k)])
            == tgt.compose(cell.components()[src.d0(k)], g.map_arrow(k))
    })
}

fn is_identity_cell(cell: &TwoCell) -> bool {
    let tgt = cell.from().target().total();
    cell.components().iter().all(|&c| tgt.is_identity(c))
}

/// Every single-entry corruption of `t` or `s` must be rejected.
fn injections_detected(cell: &TwoCell) -> Result<(usize, Vec<String>), String> {
    let enc = encode_two_cell(cell);
    let mut clauses = std::collections::BTreeSet::new();
    let mut injected = 0;
    for use_t in [true, false] {
        let table = if use_t { enc.t() } else { enc.s() };
        for (i, j, v) in table.defined().collect::<Vec<_>>() {
            for w in (0..table.cols()).map(Some).chain([None]).filter(|&w| w != Some(v)) {
                let mut bad = enc.clone();
                let t = if use_t { bad.t_mut() } else { bad.s_mut() };
                t.set(i, j, w);
                let report = bad.validate();
                ensure!(!report.is_clean(), "corruption of entry ({i},{j}) went unnoticed");
                ensure!(decode_two_cell(&bad).is_err(), "corrupted encoding decoded");
                clauses.extend(report.violations().iter().map(|v| v.clause.clone()));
                injected += 1;
            }
        }
    }
    Ok((injected, clauses.into_iter().collect()))
}

fn criterion_8() -> Outcome {
    let mut cells = Vec::new();
    for name in ["bijection:3", "pair:2,2", "heap:4", "pair:2,3"] {
        let p = match name {
            "bijection:3" => bijection_pregroup_n(3).unwrap(),
            "heap:4" => pregroupoid::generators::cyclic_heap(4).unwrap(),
            "pair:2,2" => pair_pregroupoid_n(2, 2).unwrap(),
            _ => pair_pregroupoid_n(2, 3).unwrap(),
        };
        let f = bitorsor_to_fibration(&env_to_bitorsor(&p).unwrap()).unwrap();
        cells.extend(conjugation_samples(&f, 8).into_iter().map(|c| (name, c)));
    }
    for (_, f) in product_fibrations().into_iter().take(4) {
        cells.extend(conjugation_samples(&f, 6).into_iter().map(|c| ("product", c)));
    }
    let non_identity = cells.iter().filter(|(_, c)| !is_identity_cell(c)).count();
    ensure!(
        cells.len() >= 20 && non_identity >= 10,
        "{} cells, {non_identity} non-identity",
        cells.len()
    );
    for (name, cell) in &cells {
        ensure!(natural(cell), "{name}: sample is not natural");
        let enc = encode_two_cell(cell);
        ensure!(enc.validate().is_clean(), "{name}: encoding violates its equations");
        let back = decode_two_cell(&enc).map_err(|e| format!("{name}: {e}"))?;
        ensure!(&back == cell, "{name}: decode(encode(cell)) differs");
    }
    let mut injected = 0;
    let mut clauses = std::collections::BTreeSet::new();
    for (_, cell) in cells.iter().filter(|(_, c)| !is_identity_cell(c)).take(6) {
        let (n, c) = injections_detected(cell)?;
        injected += n;
        clauses.extend(c);
    }
    for needed in ["eq-t-s", "eq-t-ternary", "eq-s-ternary"] {
        ensure!(clauses.contains(needed), "no injection triggered {needed}");
    }
    Ok(format!(
        "{} cells ({non_identity} non-identity) round-trip; {injected} injected corruptions all detected",
        cells.len()
    ))
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_pregroupoid"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    for (name, p) in [
        ("bijection3", bijection_pregroup_n(3).unwrap()),
        ("pair22", pair_pregroupoid_n(2, 2).unwrap()),
        ("enumerated", enumerate_pregroupoids(3, 2, 2).pop().unwrap()),
    ] {
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, save(&Structure::Pregroupoid(p))).map_err(|e| e.to_string())?;
        let path = path.to_str().unwrap().to_string();
        for cmd in [vec!["check", &path], vec!["envelope", &path]] {
            let first = run_cli(&cmd)?;
            let second = run_cli(&cmd)?;
            ensure!(
                first.status.code() == Some(0),
                "{name}: {cmd:?} exited {:?}",
                first.status.code()
            );
            ensure!(
                first.stdout == second.stdout && first.stderr == second.stderr,
                "{name}: {cmd:?} output differs between runs"
            );
            runs += 2;
        }
        let outs: Vec<Vec<u8>> = (0..2)
            .map(|i| {
                let out = dir.path().join(format!("{name}-env{i}.json"));
                run_cli(&["envelope", &path, "--out", out.to_str().unwrap()]).unwrap();
                std::fs::read(out).unwrap()
            })
            .collect();
        ensure!(outs[0] == outs[1], "{name}: envelope documents differ between runs");
        runs += 2;
    }
    Ok(format!("{runs} runs, byte-identical"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("axiom suite", criterion_1),
        ("envelope correctness", criterion_2),
        ("adjunction", criterion_3),
        ("strict identities", criterion_4),
        ("torsor round trips", criterion_5),
        ("counting checks", criterion_6),
        ("fibrations over I", criterion_7),
        ("2-cells", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!(
                "criterion {} PASS {name}: {detail} [{:.2}s]",
                i + 1,
                start.elapsed().as_secs_f64()
            ),
            Err(why) => {
                println!("criterion {} FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
