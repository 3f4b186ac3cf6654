//! Example structures and a brute-force enumerator of small pregroupoids.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeneratorError, StructureError};
use crate::groupoid::FiniteGroupoid;
use crate::pregroupoid::Pregroupoid;
use crate::set::{FiniteSet, Table3};
use crate::torsor::{c_left, LeftAction, LeftTorsor};

/// Default bound on carrier sizes for generated instances.
pub const MAX_CARRIER: usize = 12;

/// `1 <- 1 -> 1` with all sets labelled `*`.
pub fn terminal_pregroupoid() -> Pregroupoid {
    let mut t = Table3::new(1);
    t.set(0, 0, 0, Some(0));
    Pregroupoid::new(
        FiniteSet::point(),
        FiniteSet::point(),
        FiniteSet::point(),
        vec![0],
        vec![0],
        t,
    )
    .expect("terminal pregroupoid is well formed")
}

/// Bijections `S -> T` over one-point ends. A bijection is labelled by the
/// tuple of its values in the order of `S`; `yx^-1z` traverses `y`, then
/// `x^-1`, then `z`.
pub fn bijection_pregroup(s: &FiniteSet, t: &FiniteSet) -> Result<Pregroupoid, GeneratorError> {
    if s.len() != t.len() || s.is_empty() {
        return Err(GeneratorError::SizeMismatch(format!(
            "|S| = {}, |T| = {}",
            s.len(),
            t.len()
        )));
    }
    let k = s.len();
    let maps: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let labels = maps
        .iter()
        .map(|m| format!("({})", m.iter().map(|&i| t.label(i)).join(",")));
    let carrier = FiniteSet::new(labels)?;
    let index = |m: &[usize]| maps.iter().position(|p| p == m).expect("a permutation");
    let inverse = |m: &[usize]| {
        let mut inv = vec![0; k];
        for (i, &j) in m.iter().enumerate() {
            inv[j] = i;
        }
        inv
    };
    let n = maps.len();
    Ok(Pregroupoid::from_fn(
        carrier,
        FiniteSet::point(),
        FiniteSet::point(),
        vec![0; n],
        vec![0; n],
        |y, x, z| {
            let x_inv = inverse(&maps[x]);
            let composite: Vec<usize> = (0..k).map(|i| maps[z][x_inv[maps[y][i]]]).collect();
            Some(index(&composite))
        },
    )?)
}

/// `bijection_pregroup` on `{a, b, c, ...}` in both roles.
pub fn bijection_pregroup_n(k: usize) -> Result<Pregroupoid, GeneratorError> {
    let s = letters(k);
    bijection_pregroup(&s, &s)
}

fn letters(k: usize) -> FiniteSet {
    FiniteSet::new((0..k).map(|i| {
        if i < 26 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            format!("s{i}")
        }
    }))
    .expect("distinct")
}

/// Arrows `(o,o')` for all pairs, `(o,o') ∘ (o',o'') = (o,o'')`.
pub fn pair_groupoid(objects: &FiniteSet) -> Result<FiniteGroupoid, StructureError> {
    let n = objects.len();
    let arrows = FiniteSet::new((0..n * n).map(|f| format!("({},{})", objects.label(f / n), objects.label(f % n))))?;
    FiniteGroupoid::from_fn(
        objects.clone(),
        arrows,
        (0..n * n).map(|f| f / n).collect(),
        (0..n * n).map(|f| f % n).collect(),
        |f, g| Some((f / n) * n + g % n),
        (0..n).map(|o| o * n + o).collect(),
        (0..n * n).map(|f| (f % n) * n + f / n).collect(),
    )
}

/// `A × B` with `(a1,b)(a2,b)^-1(a2,b2) = (a1,b2)`.
pub fn pair_pregroupoid(a: &FiniteSet, b: &FiniteSet) -> Result<Pregroupoid, StructureError> {
    let nb = b.len();
    let n = a.len() * nb;
    let carrier = FiniteSet::new((0..n).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))))?;
    Pregroupoid::from_fn(
        carrier,
        a.clone(),
        b.clone(),
        (0..n).map(|x| x / nb).collect(),
        (0..n).map(|x| x % nb).collect(),
        |y, _, z| Some((y / nb) * nb + z % nb),
    )
}

/// `pair_pregroupoid` on `a0..` and `b0..`.
pub fn pair_pregroupoid_n(na: usize, nb: usize) -> Result<Pregroupoid, StructureError> {
    pair_pregroupoid(&FiniteSet::numbered("a", na), &FiniteSet::numbered("b", nb))
}

/// The cyclic group of order `n` on one object `*`, arrows `0..n`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroupoid, StructureError> {
    if n == 0 {
        return Err(StructureError::Empty("group"));
    }
    FiniteGroupoid::from_fn(
        FiniteSet::point(),
        FiniteSet::new((0..n).map(|i| i.to_string()))?,
        vec![0; n],
        vec![0; n],
        |i, j| Some((i + j) % n),
        vec![0],
        (0..n).map(|i| (n - i) % n).collect(),
    )
}

/// Permutations of `0..k` on one object; `f ∘ g` applies `f` first.
pub fn symmetric_group(k: usize) -> Result<FiniteGroupoid, StructureError> {
    if k == 0 {
        return Err(StructureError::Empty("group"));
    }
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let n = perms.len();
    let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("a permutation");
    let labels = perms.iter().map(|p| format!("[{}]", p.iter().join(",")));
    FiniteGroupoid::from_fn(
        FiniteSet::point(),
        FiniteSet::new(labels)?,
        vec![0; n],
        vec![0; n],
        |f, g| Some(index(&(0..k).map(|i| perms[g][perms[f][i]]).collect::<Vec<_>>())),
        vec![0],
        (0..n)
            .map(|f| {
                let mut inv = vec![0; k];
                for (i, &j) in perms[f].iter().enumerate() {
                    inv[j] = i;
                }
                index(&inv)
            })
            .collect(),
    )
}

/// A one-object group acting on its own arrows by `g·x = g ∘ x`, with its
/// single orbit as `B`.
pub fn regular_torsor(group: &FiniteGroupoid) -> Result<LeftTorsor, GeneratorError> {
    if group.objects().len() != 1 {
        return Err(GeneratorError::SizeMismatch(
            "regular torsor needs a one-object group".into(),
        ));
    }
    let n = group.arrow_count();
    let action = LeftAction::from_fn(group.clone(), group.arrows().clone(), vec![0; n], |g, x| {
        group.compose(g, x)
    })?;
    Ok(LeftTorsor::from_action(action)?)
}

pub fn group_regular_torsor(n: usize) -> Result<LeftTorsor, GeneratorError> {
    regular_torsor(&cyclic_group(n)?)
}

/// The heap `yx^-1z` of the cyclic group of order `n`.
pub fn cyclic_heap(n: usize) -> Result<Pregroupoid, GeneratorError> {
    Ok(c_left(&group_regular_torsor(n)?)?)
}

/// `G × B` over the one object of `G`, acted on in the first factor; the
/// orbits are `B`.
pub fn trivial_bundle(group: &FiniteGroupoid, base: &FiniteSet) -> Result<LeftTorsor, GeneratorError> {
    if group.objects().len() != 1 {
        return Err(GeneratorError::SizeMismatch("bundle needs a one-object group".into()));
    }
    let (ng, nb) = (group.arrow_count(), base.len());
    let carrier =
        FiniteSet::new((0..ng * nb).map(|x| format!("({},{})", group.arrows().label(x / nb), base.label(x % nb))))?;
    let action = LeftAction::from_fn(group.clone(), carrier, vec![0; ng * nb], |g, x| {
        Some(group.compose(g, x / nb)? * nb + x % nb)
    })?;
    Ok(LeftTorsor::new(
        action,
        base.clone(),
        (0..ng * nb).map(|x| x % nb).collect(),
    )?)
}

/// Objects `(o,p)` and arrows `(f,g)`, composed componentwise.
pub fn product_groupoid(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<FiniteGroupoid, StructureError> {
    let (go, ho) = (g.objects().len(), h.objects().len());
    let (ga, ha) = (g.arrow_count(), h.arrow_count());
    let objects =
        FiniteSet::new((0..go * ho).map(|o| format!("({},{})", g.objects().label(o / ho), h.objects().label(o % ho))))?;
    let arrows =
        FiniteSet::new((0..ga * ha).map(|f| format!("({},{})", g.arrows().label(f / ha), h.arrows().label(f % ha))))?;
    FiniteGroupoid::from_fn(
        objects,
        arrows,
        (0..ga * ha).map(|f| g.d0(f / ha) * ho + h.d0(f % ha)).collect(),
        (0..ga * ha).map(|f| g.d1(f / ha) * ho + h.d1(f % ha)).collect(),
        |f, k| Some(g.compose(f / ha, k / ha)? * ha + h.compose(f % ha, k % ha)?),
        (0..go * ho)
            .map(|o| g.identity(o / ho) * ha + h.identity(o % ho))
            .collect(),
        (0..ga * ha)
            .map(|f| g.inverse(f / ha) * ha + h.inverse(f % ha))
            .collect(),
    )
}

/// `g` followed by `h`, side by side. Labels must not clash.
pub fn disjoint_union(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Result<FiniteGroupoid, StructureError> {
    let (go, ga) = (g.objects().len(), g.arrow_count());
    let objects = FiniteSet::new(g.objects().labels().iter().chain(h.objects().labels()).cloned())?;
    let arrows = FiniteSet::new(g.arrows().labels().iter().chain(h.arrows().labels()).cloned())?;
    let total = ga + h.arrow_count();
    FiniteGroupoid::from_fn(
        objects,
        arrows,
        (0..total)
            .map(|f| if f < ga { g.d0(f) } else { go + h.d0(f - ga) })
            .collect(),
        (0..total)
            .map(|f| if f < ga { g.d1(f) } else { go + h.d1(f - ga) })
            .collect(),
        |f, k| match (f < ga, k < ga) {
            (true, true) => g.compose(f, k),
            (false, false) => h.compose(f - ga, k - ga).map(|c| c + ga),
            _ => None,
        },
        (0..go)
            .map(|o| g.identity(o))
            .chain((0..h.objects().len()).map(|o| ga + h.identity(o)))
            .collect(),
        (0..total)
            .map(|f| if f < ga { g.inverse(f) } else { ga + h.inverse(f - ga) })
            .collect(),
    )
}

/// A random groupoid with one or two components, each a pair groupoid times
/// a small group, together with inhabited object subsets `A`, `B` meeting
/// every component, such that `|G(A,B)| <= MAX_CARRIER`.
pub fn random_groupoid(seed: u64) -> (FiniteGroupoid, Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let components = rng.gen_range(1..=2);
        let mut parts = Vec::new();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut offset = 0;
        let mut size = 0;
        for c in 0..components {
            let n = rng.gen_range(1..=3);
            let group = match rng.gen_range(0..4) {
                0 => cyclic_group(1),
                1 => cyclic_group(2),
                2 => cyclic_group(3),
                _ => symmetric_group(3),
            }
            .expect("small group");
            let objects = FiniteSet::numbered(&format!("c{c}o"), n);
            let part = product_groupoid(&pair_groupoid(&objects).expect("inhabited"), &group).expect("labels distinct");
            let mut objs: Vec<usize> = (0..n).collect();
            objs.shuffle(&mut rng);
            let ka = rng.gen_range(1..=n);
            let kb = rng.gen_range(1..=n);
            let mut pa: Vec<usize> = objs[..ka].to_vec();
            objs.shuffle(&mut rng);
            let mut pb: Vec<usize> = objs[..kb].to_vec();
            pa.sort_unstable();
            pb.sort_unstable();
            size += ka * kb * group.arrow_count();
            a.extend(pa.iter().map(|o| o + offset));
            b.extend(pb.iter().map(|o| o + offset));
            offset += n;
            parts.push(part);
        }
        if size > MAX_CARRIER {
            continue;
        }
        let mut g = parts[0].clone();
        for p in &parts[1..] {
            g = disjoint_union(&g, p).expect("components use distinct labels");
        }
        return (g, a, b);
    }
}

/// `G(A,B)` for the groupoid of [`random_groupoid`].
pub fn random_pregroupoid(seed: u64) -> Pregroupoid {
    let (g, a, b) = random_groupoid(seed);
    g.underlying_pregroupoid(&a, &b).expect("A and B meet every component")
}

/// Every pregroupoid with `|X| <= max_x`, `|A| <= max_a`, `|B| <= max_b` on
/// the labels `x0..`, `a0..`, `b0..`, in a fixed order: by sizes, then by
/// `alpha`, `beta` and the table lexicographically. Labelled structures are
/// all listed; no isomorphism pruning.
pub fn enumerate_pregroupoids(max_x: usize, max_a: usize, max_b: usize) -> Vec<Pregroupoid> {
    let mut out = Vec::new();
    for n in 1..=max_x {
        for na in 1..=max_a.min(n) {
            for nb in 1..=max_b.min(n) {
                for alpha in surjections(n, na) {
                    for beta in surjections(n, nb) {
                        let mut search = Search::new(n, na, nb, alpha.clone(), beta.clone());
                        search.run(0, &mut out);
                    }
                }
            }
        }
    }
    out
}

fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    std::iter::repeat_n(0..k, n)
        .multi_cartesian_product()
        .filter(|m| (0..k).all(|i| m.contains(&i)))
        .collect()
}

/// Backtracking over the free table entries. The unit laws fix every entry
/// `xx^-1z` and `yx^-1x`; the rest range over outputs with the right
/// book-keeping and are pruned by the concatenation laws.
struct Search {
    n: usize,
    na: usize,
    nb: usize,
    alpha: Vec<usize>,
    beta: Vec<usize>,
    table: Table3,
    free: Vec<((usize, usize, usize), Vec<usize>)>,
}

impl Search {
    fn new(n: usize, na: usize, nb: usize, alpha: Vec<usize>, beta: Vec<usize>) -> Search {
        let mut table = Table3::new(n);
        let mut free = Vec::new();
        for y in 0..n {
            for x in 0..n {
                if beta[x] != beta[y] {
                    continue;
                }
                for z in 0..n {
                    if alpha[x] != alpha[z] {
                        continue;
                    }
                    if y == x {
                        table.set(y, x, z, Some(z));
                    } else if x == z {
                        table.set(y, x, z, Some(y));
                    } else {
                        let candidates = (0..n).filter(|&u| alpha[u] == alpha[y] && beta[u] == beta[z]).collect();
                        free.push(((y, x, z), candidates));
                    }
                }
            }
        }
        Search {
            n,
            na,
            nb,
            alpha,
            beta,
            table,
            free,
        }
    }

    fn run(&mut self, depth: usize, out: &mut Vec<Pregroupoid>) {
        if depth == self.free.len() {
            let p = Pregroupoid::new(
                FiniteSet::numbered("x", self.n),
                FiniteSet::numbered("a", self.na),
                FiniteSet::numbered("b", self.nb),
                self.alpha.clone(),
                self.beta.clone(),
                self.table.clone(),
            )
            .expect("well formed by construction");
            if p.validate().is_clean() {
                out.push(p);
            }
            return;
        }
        let ((y, x, z), candidates) = self.free[depth].clone();
        for u in candidates {
            self.table.set(y, x, z, Some(u));
            if self.consistent() {
                self.run(depth + 1, out);
            }
        }
        self.table.set(y, x, z, None);
    }

    /// Concatenation laws on the entries assigned so far.
    fn consistent(&self) -> bool {
        let t = &self.table;
        for (y, x, z, w) in t.defined() {
            for v in (0..self.n).filter(|&v| self.beta[v] == self.beta[y]) {
                if let (Some(l), Some(r)) = (t.get(v, y, w), t.get(v, x, z)) {
                    if l != r {
                        return false;
                    }
                }
            }
            for w2 in (0..self.n).filter(|&w2| self.alpha[w2] == self.alpha[z]) {
                if let (Some(l), Some(r)) = (t.get(w, z, w2), t.get(y, x, w2)) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Named instances used by the theorem suite and the acceptance tests.
pub struct Corpus {
    pub pregroupoids: Vec<(String, Pregroupoid)>,
    pub torsors: Vec<(String, LeftTorsor)>,
}

/// Bijection pregroups with `|S| <= 3`, pair pregroupoids with
/// `|A|, |B| <= 3`, cyclic heaps of order `<= 6`, every pregroupoid with
/// `|X| <= 3`, and regular torsors of cyclic groups of order `<= 6` and of
/// the symmetric group on three letters.
pub fn standard_corpus() -> Corpus {
    let mut pregroupoids = Vec::new();
    for k in 1..=3 {
        pregroupoids.push((format!("bijection:{k}"), bijection_pregroup_n(k).expect("valid sizes")));
    }
    for na in 1..=3 {
        for nb in 1..=3 {
            pregroupoids.push((
                format!("pair:{na},{nb}"),
                pair_pregroupoid_n(na, nb).expect("valid sizes"),
            ));
        }
    }
    for n in 1..=6 {
        pregroupoids.push((format!("heap:{n}"), cyclic_heap(n).expect("valid size")));
    }
    for (i, p) in enumerate_pregroupoids(3, 3, 3).into_iter().enumerate() {
        pregroupoids.push((format!("enumerate:3#{i}"), p));
    }
    let mut torsors = Vec::new();
    for n in 1..=6 {
        torsors.push((format!("group:{n}"), group_regular_torsor(n).expect("valid size")));
    }
    torsors.push((
        "symmetric:3".to_string(),
        regular_torsor(&symmetric_group(3).expect("valid size")).expect("one object"),
    ));
    torsors.push((
        "bundle:2,3".to_string(),
        trivial_bundle(&cyclic_group(2).expect("valid size"), &FiniteSet::numbered("b", 3)).expect("one object"),
    ));
    Corpus { pregroupoids, torsors }
}

/// A textual request for generated instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Terminal,
    Bijection(usize),
    Pair(usize, usize),
    Heap(usize),
    Group(usize),
    Symmetric(usize),
    Bundle(usize, usize),
    Random,
    Enumerate(usize),
    Corpus,
}

impl FromStr for GeneratorSpec {
    type Err = GeneratorError;

    /// `terminal`, `bijection:3`, `pair:2,3`, `heap:4`, `group:4`,
    /// `symmetric:3`, `bundle:2,3`, `random`, `enumerate:2`, `corpus`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeneratorError::BadSpec(s.to_string());
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<usize> = if args.is_empty() {
            vec![]
        } else {
            args.split(',')
                .map(|a| a.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        let one = || match nums[..] {
            [n] if n >= 1 => Ok(n),
            _ => Err(bad()),
        };
        let two = || match nums[..] {
            [m, n] if m >= 1 && n >= 1 => Ok((m, n)),
            _ => Err(bad()),
        };
        let spec = match kind {
            "terminal" if nums.is_empty() => GeneratorSpec::Terminal,
            "bijection" => GeneratorSpec::Bijection(one()?),
            "pair" => {
                let (a, b) = two()?;
                GeneratorSpec::Pair(a, b)
            }
            "heap" => GeneratorSpec::Heap(one()?),
            "group" => GeneratorSpec::Group(one()?),
            "symmetric" => GeneratorSpec::Symmetric(one()?),
            "bundle" => {
                let (g, b) = two()?;
                GeneratorSpec::Bundle(g, b)
            }
            "random" if nums.is_empty() => GeneratorSpec::Random,
            "enumerate" => GeneratorSpec::Enumerate(one()?),
            "corpus" if nums.is_empty() => GeneratorSpec::Corpus,
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Terminal => write!(f, "terminal"),
            GeneratorSpec::Bijection(k) => write!(f, "bijection:{k}"),
            GeneratorSpec::Pair(a, b) => write!(f, "pair:{a},{b}"),
            GeneratorSpec::Heap(n) => write!(f, "heap:{n}"),
            GeneratorSpec::Group(n) => write!(f, "group:{n}"),
            GeneratorSpec::Symmetric(k) => write!(f, "symmetric:{k}"),
            GeneratorSpec::Bundle(g, b) => write!(f, "bundle:{g},{b}"),
            GeneratorSpec::Random => write!(f, "random"),
            GeneratorSpec::Enumerate(n) => write!(f, "enumerate:{n}"),
            GeneratorSpec::Corpus => write!(f, "corpus"),
        }
    }
}

/// A generated instance.
#[derive(Clone, Debug)]
pub enum Generated {
    Pregroupoid(Pregroupoid),
    LeftTorsor(LeftTorsor),
}

impl GeneratorSpec {
    /// The instances this spec describes. Only `random` uses the seed.
    pub fn build(&self, seed: u64) -> Result<Vec<(String, Generated)>, GeneratorError> {
        let name = self.to_string();
        let one_p = |p: Pregroupoid| Ok(vec![(name.clone(), Generated::Pregroupoid(p))]);
        let one_t = |t: LeftTorsor| Ok(vec![(name.clone(), Generated::LeftTorsor(t))]);
        let too_big = |n: usize| -> Result<(), GeneratorError> {
            if n > MAX_CARRIER {
                Err(GeneratorError::SizeMismatch(format!(
                    "carrier of size {n} exceeds {MAX_CARRIER}"
                )))
            } else {
                Ok(())
            }
        };
        match *self {
            GeneratorSpec::Terminal => one_p(terminal_pregroupoid()),
            GeneratorSpec::Bijection(k) => {
                too_big((1..=k).product())?;
                one_p(bijection_pregroup_n(k)?)
            }
            GeneratorSpec::Pair(a, b) => {
                too_big(a * b)?;
                one_p(pair_pregroupoid_n(a, b)?)
            }
            GeneratorSpec::Heap(n) => {
                too_big(n)?;
                one_p(cyclic_heap(n)?)
            }
            GeneratorSpec::Group(n) => {
                too_big(n)?;
                one_t(group_regular_torsor(n)?)
            }
            GeneratorSpec::Symmetric(k) => {
                too_big((1..=k).product())?;
                one_t(regular_torsor(&symmetric_group(k)?)?)
            }
            GeneratorSpec::Bundle(g, b) => {
                too_big(g * b)?;
                one_t(trivial_bundle(&cyclic_group(g)?, &FiniteSet::numbered("b", b))?)
            }
            GeneratorSpec::Random => Ok(vec![(
                format!("random:{seed}"),
                Generated::Pregroupoid(random_pregroupoid(seed)),
            )]),
            GeneratorSpec::Enumerate(n) => {
                if n > 3 {
                    return Err(GeneratorError::SizeMismatch(format!("enumeration bound {n} exceeds 3")));
                }
                Ok(enumerate_pregroupoids(n, n, n)
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| (format!("enumerate:{n}#{i}"), Generated::Pregroupoid(p)))
                    .collect())
            }
            GeneratorSpec::Corpus => {
                let c = standard_corpus();
                Ok(c.pregroupoids
                    .into_iter()
                    .map(|(n, p)| (n, Generated::Pregroupoid(p)))
                    .chain(c.torsors.into_iter().map(|(n, t)| (n, Generated::LeftTorsor(t))))
                    .collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every table with entries in `X ∪ {undefined}`, filtered by the
    /// validator. Independent of the backtracking search.
    fn naive(n: usize, alpha: &[usize], beta: &[usize], na: usize, nb: usize) -> Vec<Pregroupoid> {
        let cells = n * n * n;
        std::iter::repeat_n(0..=n, cells)
            .multi_cartesian_product()
            .filter_map(|values| {
                let mut t = Table3::new(n);
                for (i, &v) in values.iter().enumerate() {
                    t.set(i / (n * n), (i / n) % n, i % n, (v < n).then_some(v));
                }
                let p = Pregroupoid::new(
                    FiniteSet::numbered("x", n),
                    FiniteSet::numbered("a", na),
                    FiniteSet::numbered("b", nb),
                    alpha.to_vec(),
                    beta.to_vec(),
                    t,
                )
                .unwrap();
                p.validate().is_clean().then_some(p)
            })
            .collect()
    }

    #[test]
    fn bijection_example_from_the_ternary_rule() {
        let p = bijection_pregroup_n(3).unwrap();
        assert_eq!(p.size(), 6);
        assert_eq!(p.apply_labels("(a,b,c)", "(b,a,c)", "(a,c,b)").unwrap(), "(c,a,b)");
        assert!(p.validate().is_clean());
    }

    #[test]
    fn bijection_size_mismatch() {
        let r = bijection_pregroup(&letters(2), &letters(3));
        assert!(matches!(r, Err(GeneratorError::SizeMismatch(_))));
    }

    #[test]
    fn singleton_bijection_pregroup() {
        let p = bijection_pregroup_n(1).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.ternary(0, 0, 0), Some(0));
    }

    #[test]
    fn pair_pregroupoid_matches_pair_groupoid_hom_set() {
        let objects = FiniteSet::new(["a0", "a1", "b0", "b1"]).unwrap();
        let g = pair_groupoid(&objects).unwrap();
        let from_groupoid = g.underlying_pregroupoid(&[0, 1], &[2, 3]).unwrap();
        let direct = pair_pregroupoid_n(2, 2).unwrap();
        assert_eq!(direct.first_difference(&from_groupoid), None);
    }

    #[test]
    fn cyclic_heap_matches_group_table() {
        for n in 1..=5 {
            let p = cyclic_heap(n).unwrap();
            for y in 0..n {
                for x in 0..n {
                    for z in 0..n {
                        assert_eq!(p.ternary(y, x, z), Some((y + n - x + z) % n));
                    }
                }
            }
        }
    }

    #[test]
    fn groups_validate() {
        for n in 1..=6 {
            assert!(cyclic_group(n).unwrap().validate().is_clean());
        }
        let s3 = symmetric_group(3).unwrap();
        assert!(s3.validate().is_clean());
        assert!(!s3.is_abelian());
    }

    #[test]
    fn product_and_union_validate() {
        let p = product_groupoid(
            &pair_groupoid(&FiniteSet::numbered("o", 2)).unwrap(),
            &cyclic_group(3).unwrap(),
        )
        .unwrap();
        assert!(p.validate().is_clean());
        assert_eq!(p.arrow_count(), 12);
        let u = disjoint_union(
            &pair_groupoid(&FiniteSet::numbered("p", 2)).unwrap(),
            &pair_groupoid(&FiniteSet::numbered("q", 1)).unwrap(),
        )
        .unwrap();
        assert!(u.validate().is_clean());
        assert!(!u.is_ab_transitive(&[0], &[2]));
    }

    #[test]
    fn trivial_bundle_validates() {
        let t = trivial_bundle(&cyclic_group(3).unwrap(), &FiniteSet::numbered("b", 2)).unwrap();
        assert!(t.is_valid(), "{}", t.validate());
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        for seed in 0..20 {
            let p = random_pregroupoid(seed);
            assert!(p.size() <= MAX_CARRIER);
            assert!(p.validate().is_clean(), "seed {seed}");
            assert_eq!(p, random_pregroupoid(seed));
        }
    }

    #[test]
    fn enumeration_with_one_element() {
        let all = enumerate_pregroupoids(1, 1, 1);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].ternary(0, 0, 0), Some(0));
    }

    #[test]
    fn enumeration_agrees_with_naive_search_on_two_elements() {
        let fast = enumerate_pregroupoids(2, 2, 2);
        let mut slow = Vec::new();
        for n in 1..=2 {
            for na in 1..=n {
                for nb in 1..=n {
                    for alpha in surjections(n, na) {
                        for beta in surjections(n, nb) {
                            slow.extend(naive(n, &alpha, &beta, na, nb));
                        }
                    }
                }
            }
        }
        assert_eq!(fast, slow);
    }

    /// Labelled heaps on `n` points are labelled groups on `n` points
    /// divided by `n` (choices of unit).
    fn heaps_by_groups(n: usize) -> usize {
        let mut groups = 0;
        for table in std::iter::repeat_n(0..n, n * n).multi_cartesian_product() {
            let m = |i: usize, j: usize| table[i * n + j];
            let assoc = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| m(m(i, j), k) == m(i, m(j, k)))));
            if !assoc {
                continue;
            }
            let Some(e) = (0..n).find(|&e| (0..n).all(|i| m(e, i) == i && m(i, e) == i)) else {
                continue;
            };
            if (0..n).all(|i| (0..n).any(|j| m(i, j) == e)) {
                groups += 1;
            }
        }
        groups / n
    }

    #[test]
    fn heap_counts_match_group_counts() {
        for n in 1..=3 {
            let heaps = enumerate_pregroupoids(n, 1, 1)
                .into_iter()
                .filter(|p| p.size() == n)
                .count();
            assert_eq!(heaps, heaps_by_groups(n), "n = {n}");
        }
    }

    #[test]
    fn two_point_heap_is_the_heap_of_the_group_of_order_two() {
        let heaps: Vec<_> = enumerate_pregroupoids(2, 1, 1)
            .into_iter()
            .filter(|p| p.size() == 2)
            .collect();
        assert_eq!(heaps.len(), 1);
        let z2 = cyclic_heap(2).unwrap();
        for (y, x, z, u) in heaps[0].table().defined() {
            assert_eq!(z2.ternary(y, x, z), Some(u));
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "terminal",
            "bijection:3",
            "pair:2,3",
            "heap:4",
            "group:4",
            "symmetric:3",
            "bundle:2,3",
            "random",
            "enumerate:2",
            "corpus",
        ] {
            assert_eq!(s.parse::<GeneratorSpec>().unwrap().to_string(), s);
        }
        assert!("pair:2".parse::<GeneratorSpec>().is_err());
        assert!("bijection:0".parse::<GeneratorSpec>().is_err());
        assert!("nope".parse::<GeneratorSpec>().is_err());
    }
}
