//! Builders and constructions on finite semigroups: free nilpotent semigroups,
//! adjoined identities and zeros, products, 0-direct unions, quotients.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result, Side};
use crate::partition::Partition;
use crate::semigroup::{ElementId, FiniteSemigroup, Limits};

/// Free `d`-nilpotent semigroup over `alphabet`.
///
/// Index 0 is the zero (labelled `0`), followed by the words of length `1..d`
/// ordered by length and then lexicographically in alphabet order.
pub fn build_free_nilpotent(alphabet: &[String], d: usize) -> Result<FiniteSemigroup> {
    build_free_nilpotent_with(alphabet, d, &Limits::default())
}

pub fn build_free_nilpotent_with(
    alphabet: &[String],
    d: usize,
    limits: &Limits,
) -> Result<FiniteSemigroup> {
    if alphabet.is_empty() {
        return Err(Error::InvalidArgument("empty alphabet".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("nilpotency degree must be at least 1".into()));
    }
    let k = alphabet.len() as u128;
    // offsets[len] = index of the first word of that length
    let mut offsets: Vec<u128> = vec![0, 1];
    let mut total: u128 = 1;
    let mut layer: u128 = 1;
    for _ in 1..d {
        layer = layer.saturating_mul(k);
        total = total.saturating_add(layer);
        limits.check_order(total)?;
        offsets.push(total);
    }
    limits.check_order(total)?;
    let order = total as usize;

    let mut words: Vec<Vec<usize>> = Vec::with_capacity(order);
    words.push(Vec::new());
    let mut current: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 1..d {
        let mut next = Vec::with_capacity(current.len() * alphabet.len());
        for w in &current {
            for c in 0..alphabet.len() {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        current = next;
    }
    debug_assert_eq!(words.len(), order);

    let index_of = |w: &[usize]| -> usize {
        let mut r: u128 = 0;
        for &c in w {
            r = r * k + c as u128;
        }
        (offsets[w.len()] + r) as usize
    };

    let labels: Vec<String> = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "0".to_string()
            } else {
                w.iter().map(|&c| alphabet[c].as_str()).collect()
            }
        })
        .collect();

    let mut table = Vec::with_capacity(order * order);
    let mut buf = Vec::with_capacity(2 * d);
    for u in &words {
        for v in &words {
            if u.is_empty() || v.is_empty() || u.len() + v.len() >= d {
                table.push(ElementId(0));
            } else {
                buf.clear();
                buf.extend_from_slice(u);
                buf.extend_from_slice(v);
                table.push(ElementId::new(index_of(&buf)));
            }
        }
    }
    let name = format!("FN{}{{{}}}", d, alphabet.join(","));
    FiniteSemigroup::from_flat(name, labels, table)
}

/// Adjoins a fresh identity as the last element.
///
/// With `reuse_existing`, a semigroup that already has an identity is returned unchanged.
pub fn adjoin_identity(s: &FiniteSemigroup, reuse_existing: bool) -> Result<FiniteSemigroup> {
    if reuse_existing && s.identity().is_some() {
        return Ok(s.clone());
    }
    let n = s.order();
    let one = ElementId::new(n);
    let mut labels = s.labels().to_vec();
    labels.push(s.fresh_label("1"));
    let mut table = Vec::with_capacity((n + 1) * (n + 1));
    for a in 0..=n {
        for b in 0..=n {
            let v = if a == n {
                ElementId::new(b)
            } else if b == n {
                ElementId::new(a)
            } else {
                s.mul(ElementId::new(a), ElementId::new(b))
            };
            table.push(v);
        }
    }
    debug_assert_eq!(table[n * (n + 1) + n], one);
    FiniteSemigroup::from_flat(format!("({})^1", s.name()), labels, table)
}

/// `S ⊔ {0}`: adjoins a fresh zero as the last element, even if `S` already has one.
pub fn adjoin_zero(s: &FiniteSemigroup) -> Result<FiniteSemigroup> {
    let n = s.order();
    let zero = ElementId::new(n);
    let mut labels = s.labels().to_vec();
    labels.push(s.fresh_label("0"));
    let mut table = Vec::with_capacity((n + 1) * (n + 1));
    for a in 0..=n {
        for b in 0..=n {
            if a == n || b == n {
                table.push(zero);
            } else {
                table.push(s.mul(ElementId::new(a), ElementId::new(b)));
            }
        }
    }
    FiniteSemigroup::from_flat(format!("({}) + 0", s.name()), labels, table)
}

/// `S⁰`: `S` itself when it has a zero, otherwise `S ⊔ {0}`.
pub fn s_zero(s: &FiniteSemigroup) -> Result<FiniteSemigroup> {
    if s.zero().is_some() {
        Ok(s.clone())
    } else {
        adjoin_zero(s)
    }
}

/// Componentwise product, elements ordered lexicographically by `(s, t)`.
pub fn direct_product(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Result<FiniteSemigroup> {
    let (n, m) = (s.order(), t.order());
    let order = (n as u128) * (m as u128);
    Limits::default().check_order(order)?;
    let order = order as usize;
    let labels = (0..order)
        .map(|k| format!("({},{})", s.labels()[k / m], t.labels()[k % m]))
        .collect();
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            let x = s.mul(ElementId::new(a / m), ElementId::new(b / m)).index();
            let y = t.mul(ElementId::new(a % m), ElementId::new(b % m)).index();
            table.push(ElementId::new(x * m + y));
        }
    }
    FiniteSemigroup::from_flat(format!("{} x {}", s.name(), t.name()), labels, table)
}

/// `S ∪₀ T` with the embeddings of `S⁰` and `T⁰`.
#[derive(Debug, Clone)]
pub struct ZeroDirectUnion {
    pub semigroup: FiniteSemigroup,
    /// `left[k]` is the image of element `k` of `S⁰`.
    pub left: Vec<ElementId>,
    /// `right[k]` is the image of element `k` of `T⁰`.
    pub right: Vec<ElementId>,
}

/// 0-direct union. The shared zero is index 0, followed by the nonzero elements
/// of `S⁰` and then those of `T⁰`. Right-hand labels that clash get primed.
pub fn zero_direct_union(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Result<ZeroDirectUnion> {
    let s0 = s_zero(s)?;
    let t0 = s_zero(t)?;
    let (sz, tz) = (s0.zero().expect("S0 has a zero"), t0.zero().expect("T0 has a zero"));
    let order = s0.order() + t0.order() - 1;
    Limits::default().check_order(order as u128)?;

    let mut left = vec![ElementId(0); s0.order()];
    let mut right = vec![ElementId(0); t0.order()];
    let mut labels = vec![s0.label(sz).to_string()];
    let mut origin: Vec<(u8, ElementId)> = vec![(0, sz)];
    for e in s0.elements().filter(|&e| e != sz) {
        left[e.index()] = ElementId::new(labels.len());
        labels.push(s0.label(e).to_string());
        origin.push((1, e));
    }
    for e in t0.elements().filter(|&e| e != tz) {
        right[e.index()] = ElementId::new(labels.len());
        let mut l = t0.label(e).to_string();
        while labels.contains(&l) {
            l.push('\'');
        }
        labels.push(l);
        origin.push((2, e));
    }

    let mut table = Vec::with_capacity(order * order);
    for &(sa, a) in &origin {
        for &(sb, b) in &origin {
            let v = match (sa, sb) {
                (1, 1) => left[s0.mul(a, b).index()],
                (2, 2) => right[t0.mul(a, b).index()],
                _ => ElementId(0),
            };
            table.push(v);
        }
    }
    let semigroup =
        FiniteSemigroup::from_flat(format!("{} u0 {}", s.name(), t.name()), labels, table)?;
    Ok(ZeroDirectUnion {
        semigroup,
        left,
        right,
    })
}

/// Lexicographically least `(x, y)` with `xy` and `rep(x)rep(y)` in different blocks.
pub fn congruence_witness(s: &FiniteSemigroup, p: &Partition) -> Option<(usize, usize, usize, usize)> {
    for x in s.elements() {
        let rx = p.representative(x);
        for y in s.elements() {
            let ry = p.representative(y);
            if !p.same_class(s.mul(x, y), s.mul(rx, ry)) {
                return Some((x.index(), rx.index(), y.index(), ry.index()));
            }
        }
    }
    None
}

/// Quotient by a congruence. Block `k` becomes element `k`, labelled by its least member.
pub fn quotient_by_partition(s: &FiniteSemigroup, p: &Partition) -> Result<FiniteSemigroup> {
    if p.universe_len() != s.order() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} elements, semigroup has {}",
            p.universe_len(),
            s.order()
        )));
    }
    if let Some((x, x2, y, y2)) = congruence_witness(s, p) {
        return Err(Error::NotACongruence { x, x2, y, y2 });
    }
    let k = p.len();
    let labels = p
        .blocks()
        .iter()
        .map(|b| s.label(b[0]).to_string())
        .collect();
    let mut table = Vec::with_capacity(k * k);
    for a in p.blocks() {
        for b in p.blocks() {
            table.push(ElementId::new(p.class_of(s.mul(a[0], b[0]))));
        }
    }
    FiniteSemigroup::from_flat(format!("{}/~", s.name()), labels, table)
}

/// Checks `IS ⊆ I` and `SI ⊆ I`, returning the first violation.
pub fn ideal_witness(s: &FiniteSemigroup, ideal: &[ElementId]) -> Option<(usize, usize, Side)> {
    let mut member = vec![false; s.order()];
    for e in ideal {
        member[e.index()] = true;
    }
    let mut sorted: Vec<ElementId> = ideal.to_vec();
    sorted.sort();
    sorted.dedup();
    for &i in &sorted {
        for t in s.elements() {
            if !member[s.mul(i, t).index()] {
                return Some((i.index(), t.index(), Side::Right));
            }
            if !member[s.mul(t, i).index()] {
                return Some((i.index(), t.index(), Side::Left));
            }
        }
    }
    None
}

/// Rees quotient `S/I`: the ideal collapses to a single zero.
pub fn rees_quotient(s: &FiniteSemigroup, ideal: &[ElementId]) -> Result<FiniteSemigroup> {
    if ideal.is_empty() {
        return Err(Error::InvalidArgument("ideal must be nonempty".into()));
    }
    if let Some(bad) = ideal.iter().find(|e| e.index() >= s.order()) {
        return Err(Error::ElementOutOfRange(bad.index()));
    }
    if let Some((element, by, side)) = ideal_witness(s, ideal) {
        return Err(Error::NotAnIdeal { element, by, side });
    }
    let mut block: Vec<ElementId> = ideal.to_vec();
    block.sort();
    block.dedup();
    let p = Partition::from_classes(s.order(), &[block])?;
    Ok(quotient_by_partition(s, &p)?.with_name(format!("{}/I", s.name())))
}

/// Least subset containing `gens` and closed under the product, sorted.
pub fn subsemigroup_closure(s: &FiniteSemigroup, gens: &[ElementId]) -> Vec<ElementId> {
    let mut member = vec![false; s.order()];
    let mut members: Vec<ElementId> = Vec::new();
    let mut queue: VecDeque<ElementId> = VecDeque::new();
    for &g in gens {
        if !member[g.index()] {
            member[g.index()] = true;
            members.push(g);
            queue.push_back(g);
        }
    }
    while let Some(x) = queue.pop_front() {
        let snapshot = members.len();
        for k in 0..snapshot {
            let y = members[k];
            for p in [s.mul(x, y), s.mul(y, x)] {
                if !member[p.index()] {
                    member[p.index()] = true;
                    members.push(p);
                    queue.push_back(p);
                }
            }
        }
    }
    members.sort();
    members
}

/// Greedy generating set: scan elements in index order, keep those not yet generated.
pub fn generating_set(s: &FiniteSemigroup) -> Vec<ElementId> {
    let mut gens = Vec::new();
    let mut covered = vec![false; s.order()];
    for e in s.elements() {
        if !covered[e.index()] {
            gens.push(e);
            for c in subsemigroup_closure(s, &gens) {
                covered[c.index()] = true;
            }
        }
    }
    gens
}

/// Finds an isomorphism `a -> b` by choosing generator images and extending.
/// Returns `map[x] = image of x`, verified against both full tables.
pub fn find_isomorphism(a: &FiniteSemigroup, b: &FiniteSemigroup) -> Option<Vec<ElementId>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = generating_set(a);
    // Spanning tree: every non-generator element is parent * generator.
    let mut recipe: Vec<Option<(ElementId, usize)>> = vec![None; a.order()];
    let mut reached = vec![false; a.order()];
    let mut bfs: VecDeque<ElementId> = VecDeque::new();
    let mut sequence: Vec<ElementId> = Vec::new();
    for &g in &gens {
        reached[g.index()] = true;
        bfs.push_back(g);
    }
    while let Some(x) = bfs.pop_front() {
        sequence.push(x);
        for (gi, &g) in gens.iter().enumerate() {
            let p = a.mul(x, g);
            if !reached[p.index()] {
                reached[p.index()] = true;
                recipe[p.index()] = Some((x, gi));
                bfs.push_back(p);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return None;
    }

    let sig_a: Vec<Signature> = a.elements().map(|e| Signature::of(a, e)).collect();
    let sig_b: Vec<Signature> = b.elements().map(|e| Signature::of(b, e)).collect();
    let candidates: Vec<Vec<ElementId>> = gens
        .iter()
        .map(|g| {
            b.elements()
                .filter(|&y| sig_b[y.index()] == sig_a[g.index()])
                .collect()
        })
        .collect();

    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    loop {
        let mut map = vec![ElementId(0); a.order()];
        for (gi, g) in gens.iter().enumerate() {
            map[g.index()] = candidates[gi][choice[gi]];
        }
        for &x in &sequence {
            if let Some((parent, gi)) = recipe[x.index()] {
                map[x.index()] = b.mul(map[parent.index()], map[gens[gi].index()]);
            }
        }
        if is_isomorphism(a, b, &map) {
            return Some(map);
        }
        // odometer over candidate choices
        let mut k = 0;
        loop {
            if k == gens.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Full-table check that `map` is a bijective homomorphism.
pub fn is_isomorphism(a: &FiniteSemigroup, b: &FiniteSemigroup, map: &[ElementId]) -> bool {
    if a.order() != b.order() || map.len() != a.order() {
        return false;
    }
    let image: BTreeSet<ElementId> = map.iter().copied().collect();
    if image.len() != a.order() {
        return false;
    }
    is_homomorphism(a, b, map)
}

pub fn is_homomorphism(a: &FiniteSemigroup, b: &FiniteSemigroup, map: &[ElementId]) -> bool {
    a.elements().all(|x| {
        a.elements()
            .all(|y| map[a.mul(x, y).index()] == b.mul(map[x.index()], map[y.index()]))
    })
}

/// Isomorphism invariants used to prune generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Signature {
    is_identity: bool,
    is_zero: bool,
    index: usize,
    period: usize,
}

impl Signature {
    fn of(s: &FiniteSemigroup, e: ElementId) -> Self {
        let mut seen: Vec<ElementId> = vec![e];
        let mut cur = e;
        loop {
            cur = s.mul(cur, e);
            if let Some(pos) = seen.iter().position(|&x| x == cur) {
                return Signature {
                    is_identity: s.identity() == Some(e),
                    is_zero: s.zero() == Some(e),
                    index: pos + 1,
                    period: seen.len() - pos,
                };
            }
            seen.push(cur);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{cyclic_group, semilattice2, trivial};

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn free_nilpotent_orders() {
        assert_eq!(build_free_nilpotent(&ab(), 5).unwrap().order(), 31);
        let a3 = build_free_nilpotent(&["a".to_string()], 3).unwrap();
        assert_eq!(a3.labels(), &["0", "a", "aa"]);
        assert_eq!(build_free_nilpotent(&ab(), 1).unwrap().order(), 1);
    }

    #[test]
    fn free_nilpotent_products_concatenate() {
        let s = build_free_nilpotent(&ab(), 4).unwrap();
        let a = s.element("a").unwrap();
        let b = s.element("b").unwrap();
        let ab = s.mul(a, b);
        assert_eq!(s.label(ab), "ab");
        assert_eq!(s.label(s.mul(ab, b)), "abb");
        assert_eq!(s.mul(s.mul(ab, b), a), s.zero().unwrap());
        assert_eq!(s.zero(), Some(ElementId(0)));
        assert_eq!(s.identity(), None);
    }

    #[test]
    fn size_cap_is_enforced() {
        let letters: Vec<String> = (0..4).map(|i| format!("c{i}")).collect();
        let err = build_free_nilpotent(&letters, 8).unwrap_err();
        assert!(matches!(err, Error::SizeOverflow { .. }));
    }

    #[test]
    fn adjoining_identity() {
        let s = adjoin_identity(&build_free_nilpotent(&ab(), 5).unwrap(), false).unwrap();
        assert_eq!(s.order(), 32);
        let one = s.identity().unwrap();
        assert_eq!(one.index(), 31);
        let ab = s.element("ab").unwrap();
        assert_eq!(s.mul(one, ab), ab);

        let t = adjoin_identity(&trivial(), false).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.mul(ElementId(0), ElementId(0)), ElementId(0));
        assert_eq!(t.identity(), Some(ElementId(1)));

        let sl = semilattice2();
        assert_eq!(adjoin_identity(&sl, true).unwrap().order(), 2);
        assert_eq!(adjoin_identity(&sl, false).unwrap().order(), 3);
    }

    #[test]
    fn adjoining_zero() {
        let chain = adjoin_zero(&semilattice2()).unwrap();
        assert_eq!(chain.order(), 3);
        assert_eq!(chain.zero(), Some(ElementId(2)));
        // old zero is absorbed by the new one
        assert_eq!(chain.mul(ElementId(2), ElementId(0)), ElementId(2));
        assert!(chain.is_commutative());
        for x in chain.elements() {
            assert_eq!(chain.mul(x, x), x);
        }
        assert_eq!(adjoin_zero(&trivial()).unwrap().order(), 2);
    }

    #[test]
    fn s_zero_cases() {
        let fn3 = build_free_nilpotent(&["a".to_string()], 3).unwrap();
        assert_eq!(s_zero(&fn3).unwrap(), fn3);
        assert_eq!(s_zero(&cyclic_group(2).unwrap()).unwrap().order(), 3);
        assert_eq!(s_zero(&trivial()).unwrap().order(), 1);
    }

    #[test]
    fn products() {
        let sl = semilattice2();
        let sq = direct_product(&sl, &sl).unwrap();
        assert_eq!(sq.order(), 4);
        let x = sq.element("(0,1)").unwrap();
        let y = sq.element("(1,0)").unwrap();
        assert_eq!(sq.label(sq.mul(x, y)), "(0,0)");
        let fn3 = build_free_nilpotent(&["a".to_string()], 3).unwrap();
        let z4 = cyclic_group(4).unwrap();
        assert_eq!(direct_product(&fn3, &z4).unwrap().order(), 12);
        let with_trivial = direct_product(&fn3, &trivial()).unwrap();
        assert!(find_isomorphism(&fn3, &with_trivial).is_some());
    }

    #[test]
    fn zero_union_of_semilattices() {
        let sl = semilattice2();
        let u = zero_direct_union(&sl, &sl).unwrap();
        assert_eq!(u.semigroup.order(), 3);
        let s1 = u.left[1];
        let t1 = u.right[1];
        assert_eq!(u.semigroup.mul(s1, t1), ElementId(0));
        assert_eq!(u.semigroup.mul(s1, s1), s1);
    }

    #[test]
    fn quotient_and_congruence_errors() {
        let fn3 = build_free_nilpotent(&["a".to_string()], 3).unwrap();
        let same = quotient_by_partition(&fn3, &Partition::singletons(3)).unwrap();
        assert_eq!(same.rows(), fn3.rows());
        // {a, aa} merged: a*a = aa but a*aa = 0 while aa*aa = 0; a*a=aa vs aa*a = 0 differ
        let p = Partition::from_classes(3, &[vec![ElementId(1), ElementId(2)]]).unwrap();
        assert!(matches!(
            quotient_by_partition(&fn3, &p),
            Err(Error::NotACongruence { .. })
        ));
    }

    #[test]
    fn rees_quotients() {
        let s = build_free_nilpotent(&ab(), 5).unwrap();
        let ideal: Vec<ElementId> = s
            .elements()
            .filter(|&e| e == ElementId(0) || s.label(e).len() >= 3)
            .collect();
        let q = rees_quotient(&s, &ideal).unwrap();
        assert_eq!(q.order(), 7);
        let fn3 = build_free_nilpotent(&ab(), 3).unwrap();
        assert!(find_isomorphism(&q, &fn3).is_some());

        let only_zero = rees_quotient(&s, &[ElementId(0)]).unwrap();
        assert_eq!(only_zero.rows(), s.rows());
        let all: Vec<ElementId> = s.elements().collect();
        assert_eq!(rees_quotient(&s, &all).unwrap().order(), 1);

        let err = rees_quotient(&s, &[s.element("ab").unwrap()]).unwrap_err();
        assert!(matches!(err, Error::NotAnIdeal { .. }));
    }

    #[test]
    fn closures() {
        let s = adjoin_identity(&build_free_nilpotent(&ab(), 4).unwrap(), false).unwrap();
        let a = s.element("a").unwrap();
        let got: Vec<&str> = subsemigroup_closure(&s, &[a])
            .into_iter()
            .map(|e| s.label(e))
            .collect();
        assert_eq!(got, vec!["0", "a", "aa", "aaa"]);
        let all: Vec<ElementId> = s.elements().collect();
        assert_eq!(subsemigroup_closure(&s, &all), all);
        let one = s.identity().unwrap();
        assert_eq!(subsemigroup_closure(&s, &[one]), vec![one]);
    }
}
