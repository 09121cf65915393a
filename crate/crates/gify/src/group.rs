//! Finite groups as validated Cayley tables, with subgroups, cosets,
//! automorphism enumeration, and the admissibility and balance classifiers.
//!
//! Conventions fixed across the crate:
//! - elements are indices `0..n`, the identity is always index 0;
//! - coset representatives are the smallest element index in each coset,
//!   so the first representative is the identity;
//! - automorphism lists are sorted lexicographically by permutation.

use crate::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the table: Latin square, identity at index 0, associativity.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has an out-of-range entry"
                )));
            }
        }
        for (j, &t0j) in table[0].iter().enumerate() {
            if t0j != j {
                return Err(Error::InvalidGroup("index 0 is not a left identity".into()));
            }
        }
        for (j, row) in table.iter().enumerate() {
            if row[0] != j {
                return Err(Error::InvalidGroup(
                    "index 0 is not a right identity".into(),
                ));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if seen_row[table[i][j]] {
                    return Err(Error::InvalidGroup(format!("row {i} repeats an element")));
                }
                seen_row[table[i][j]] = true;
                if seen_col[table[j][i]] {
                    return Err(Error::InvalidGroup(format!(
                        "column {i} repeats an element"
                    )));
                }
                seen_col[table[j][i]] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inverses[a] = b,
                _ => return Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            labels,
            table,
            inverses,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// Z_n with table[i][j] = (i + j) mod n.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup(
            "cyclic group order must be positive".into(),
        ));
    }
    let table = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteGroup::from_table(format!("Z{n}"), labels, table)
}

/// The quaternion group Q_8 with elements ordered (1, -1, i, -i, j, -j, k, -k).
pub fn make_quaternion() -> FiniteGroup {
    // Encode index 2a+s as axis a in {1=i, 2=j, 3=k} (0 for the reals) and
    // sign s (0 positive, 1 negative); ij = k with the cyclic sign rule.
    let axis = |e: usize| e / 2;
    let neg = |e: usize| e % 2 == 1;
    let pack = |a: usize, n: bool| 2 * a + usize::from(n);
    let mul = |x: usize, y: usize| -> usize {
        let (a, b) = (axis(x), axis(y));
        let mut n = neg(x) ^ neg(y);
        let c = if a == 0 {
            b
        } else if b == 0 {
            a
        } else if a == b {
            n = !n;
            0
        } else {
            // i*j = k, j*k = i, k*i = j; reversed order flips the sign
            let cyclic = matches!((a, b), (1, 2) | (2, 3) | (3, 1));
            if !cyclic {
                n = !n;
            }
            6 - a - b
        };
        pack(c, n)
    };
    let table = (0..8)
        .map(|i| (0..8).map(|j| mul(i, j)).collect())
        .collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table("Q8", labels, table).expect("Q8 table is valid")
}

/// Dihedral group of order 2k: indices 0..k are the rotations r^a, indices
/// k..2k are the reflections r^a s, with s r = r^{-1} s.
pub fn make_dihedral(k: usize) -> Result<FiniteGroup> {
    if k < 2 {
        return Err(Error::InvalidGroup(
            "dihedral parameter must be at least 2".into(),
        ));
    }
    let n = 2 * k;
    let mul = |x: usize, y: usize| -> usize {
        let (a, e) = (x % k, x / k);
        let (b, f) = (y % k, y / k);
        let rot = if e == 0 { (a + b) % k } else { (a + k - b) % k };
        rot + k * ((e + f) % 2)
    };
    let table = (0..n)
        .map(|i| (0..n).map(|j| mul(i, j)).collect())
        .collect();
    let labels = (0..n)
        .map(|x| {
            let (a, e) = (x % k, x / k);
            match (a, e) {
                (0, 0) => "1".to_string(),
                (1, 0) => "r".to_string(),
                (a, 0) => format!("r{a}"),
                (0, 1) => "s".to_string(),
                (1, 1) => "rs".to_string(),
                (a, 1) => format!("r{a}s"),
                _ => unreachable!(),
            }
        })
        .collect();
    FiniteGroup::from_table(format!("D{k}"), labels, table)
}

/// Componentwise product on pairs, indexed lexicographically.
pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> FiniteGroup {
    let (n1, n2) = (g1.order(), g2.order());
    let n = n1 * n2;
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut table = vec![vec![0; n]; n];
    for a1 in 0..n1 {
        for b1 in 0..n2 {
            for a2 in 0..n1 {
                for b2 in 0..n2 {
                    table[idx(a1, b1)][idx(a2, b2)] = idx(g1.mul(a1, a2), g2.mul(b1, b2));
                }
            }
        }
    }
    let labels = (0..n)
        .map(|x| format!("({},{})", g1.label(x / n2), g2.label(x % n2)))
        .collect();
    FiniteGroup::from_table(format!("{}x{}", g1.name(), g2.name()), labels, table)
        .expect("product of valid tables is valid")
}

/// A subgroup stored as the sorted set of its element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(g: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&e| e >= g.order()) {
            return Err(Error::NotSubgroup("element index out of range".into()));
        }
        if !elems.contains(&0) {
            return Err(Error::NotSubgroup("missing the identity".into()));
        }
        for &a in &elems {
            if elems.binary_search(&g.inv(a)).is_err() {
                return Err(Error::NotSubgroup(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for &b in &elems {
                if elems.binary_search(&g.mul(a, b)).is_err() {
                    return Err(Error::NotSubgroup(format!(
                        "not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Subgroup { elements: elems })
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            elements: (0..g.order()).collect(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// Position of a parent-group element inside the sorted subgroup list.
    pub fn index_of(&self, e: usize) -> Option<usize> {
        self.elements.binary_search(&e).ok()
    }

    /// First (subgroup element, group element) pair that fails to commute.
    pub fn centrality_violation(&self, g: &FiniteGroup) -> Option<(usize, usize)> {
        for &h in &self.elements {
            for x in 0..g.order() {
                if g.mul(h, x) != g.mul(x, h) {
                    return Some((h, x));
                }
            }
        }
        None
    }

    pub fn is_central_in(&self, g: &FiniteGroup) -> bool {
        self.centrality_violation(g).is_none()
    }

    /// The subgroup as an abstract group on its sorted element list.
    pub fn as_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let k = self.elements.len();
        let table = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        self.index_of(g.mul(self.elements[i], self.elements[j]))
                            .expect("subgroup closure")
                    })
                    .collect()
            })
            .collect();
        let labels = self
            .elements
            .iter()
            .map(|&e| g.label(e).to_string())
            .collect();
        FiniteGroup::from_table(format!("{}<{}>", g.name(), k), labels, table)
            .expect("subgroup table is valid")
    }
}

/// The center {z : zg = gz for all g}.
pub fn center(g: &FiniteGroup) -> Subgroup {
    let n = g.order();
    let elems: Vec<usize> = (0..n)
        .filter(|&z| (0..n).all(|x| g.mul(z, x) == g.mul(x, z)))
        .collect();
    Subgroup::from_elements(g, &elems).expect("center is a subgroup")
}

/// Closure of a generating set.
pub fn generated_subgroup(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                frontier.push(y);
            }
        }
    }
    (0..n).filter(|&x| inside[x]).collect()
}

/// Coset decomposition of `G/H` with deterministic representatives.
///
/// `coset_of[g] = (k, h)` with `g = reps[k] * elements[h]`; the second
/// component indexes into the sorted subgroup list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSystem {
    pub reps: Vec<usize>,
    pub coset_of: Vec<(usize, usize)>,
}

/// Representatives are the smallest element index in each coset, so
/// `reps[0]` is the identity.
pub fn coset_system(g: &FiniteGroup, h: &Subgroup) -> Result<CosetSystem> {
    let n = g.order();
    let mut coset_of = vec![None; n];
    let mut reps = Vec::new();
    for e in 0..n {
        if coset_of[e].is_some() {
            continue;
        }
        let k = reps.len();
        reps.push(e);
        for (hi, &hh) in h.elements().iter().enumerate() {
            let x = g.mul(e, hh);
            if coset_of[x].is_some() {
                return Err(Error::NotSubgroup(format!(
                    "coset of {e} overlaps an earlier coset at {x}"
                )));
            }
            coset_of[x] = Some((k, hi));
        }
    }
    let coset_of = coset_of
        .into_iter()
        .map(|o| o.expect("cosets cover G"))
        .collect();
    Ok(CosetSystem { reps, coset_of })
}

impl CosetSystem {
    pub fn m(&self) -> usize {
        self.reps.len()
    }
}

/// A group automorphism stored as the image of every element index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    pub perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    pub fn apply(&self, e: usize) -> usize {
        self.perm[e]
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            perm[x] = i;
        }
        Automorphism { perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_valid_on(&self, g: &FiniteGroup) -> bool {
        let n = g.order();
        if self.perm.len() != n || self.perm[0] != 0 {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in &self.perm {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        (0..n).all(|a| (0..n).all(|b| self.perm[g.mul(a, b)] == g.mul(self.perm[a], self.perm[b])))
    }

    pub fn fixes_pointwise(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&e| self.perm[e] == e)
    }
}

/// Automorphism search cap; `GIFY_MAX_GROUP_ORDER` overrides the default 64.
pub fn max_order_cap() -> usize {
    std::env::var("GIFY_MAX_GROUP_ORDER")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(64)
}

/// A small generating set found greedily and pruned of redundant members.
fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut gens: Vec<usize> = Vec::new();
    let mut covered = vec![false; n];
    covered[0] = true;
    for e in 1..n {
        if !covered[e] {
            gens.push(e);
            for x in generated_subgroup(g, &gens) {
                covered[x] = true;
            }
            if covered.iter().all(|&c| c) {
                break;
            }
        }
    }
    let mut i = 0;
    while i < gens.len() {
        let mut pruned = gens.clone();
        pruned.remove(i);
        if !pruned.is_empty() && generated_subgroup(g, &pruned).len() == n {
            gens = pruned;
        } else {
            i += 1;
        }
    }
    gens
}

/// Propagates a partial map on generators to the subgroup they generate,
/// checking multiplicative consistency and injectivity along the way.
struct PartialMap {
    img: Vec<Option<usize>>,
    used: Vec<bool>,
    known: Vec<usize>,
}

impl PartialMap {
    fn new(n: usize) -> Self {
        let mut pm = PartialMap {
            img: vec![None; n],
            used: vec![false; n],
            known: Vec::new(),
        };
        pm.img[0] = Some(0);
        pm.used[0] = true;
        pm.known.push(0);
        pm
    }

    /// Asserts `a -> x` and closes under products with everything known.
    fn assign(&mut self, g: &FiniteGroup, a: usize, x: usize) -> bool {
        let mut queue = vec![(a, x)];
        while let Some((a, x)) = queue.pop() {
            match self.img[a] {
                Some(y) => {
                    if y != x {
                        return false;
                    }
                    continue;
                }
                None => {
                    if self.used[x] {
                        return false;
                    }
                    self.img[a] = Some(x);
                    self.used[x] = true;
                    for &b in self.known.iter() {
                        let yb = self.img[b].expect("known element has an image");
                        queue.push((g.mul(a, b), g.mul(x, yb)));
                        queue.push((g.mul(b, a), g.mul(yb, x)));
                    }
                    queue.push((g.mul(a, a), g.mul(x, x)));
                    self.known.push(a);
                }
            }
        }
        true
    }
}

/// Complete list of automorphisms, sorted lexicographically by permutation.
///
/// Backtracks over images of a generating set, pruning candidates whose
/// element order differs from the generator's.
pub fn automorphisms(g: &FiniteGroup) -> Result<Vec<Automorphism>> {
    let cap = max_order_cap();
    let n = g.order();
    if n > cap {
        return Err(Error::CapExceeded { order: n, cap });
    }
    if n == 1 {
        return Ok(vec![Automorphism::identity(1)]);
    }
    let gens = generating_set(g);
    let orders: Vec<usize> = (0..n).map(|e| g.element_order(e)).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, PartialMap)> = vec![(0, PartialMap::new(n))];
    while let Some((pos, pm)) = stack.pop() {
        if pos == gens.len() {
            if pm.img.iter().all(|o| o.is_some()) {
                let perm = pm.img.iter().map(|o| o.unwrap()).collect();
                out.push(Automorphism { perm });
            }
            continue;
        }
        let gen = gens[pos];
        for cand in 0..n {
            if orders[cand] != orders[gen] {
                continue;
            }
            let mut next = PartialMap {
                img: pm.img.clone(),
                used: pm.used.clone(),
                known: pm.known.clone(),
            };
            if next.assign(g, gen, cand) {
                stack.push((pos + 1, next));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Automorphisms restricting to the identity on `h`.
pub fn automorphisms_fixing(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<Automorphism>> {
    Ok(automorphisms(g)?
        .into_iter()
        .filter(|a| a.fixes_pointwise(h))
        .collect())
}

/// Conjugation maps x -> g x g^{-1}, deduplicated and sorted.
pub fn inner_automorphisms(g: &FiniteGroup) -> Vec<Automorphism> {
    let n = g.order();
    let mut out: Vec<Automorphism> = (0..n)
        .map(|c| Automorphism {
            perm: (0..n).map(|x| g.conjugate(c, x)).collect(),
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The displacement set {g^{-1} sigma(g) : g in G}.
pub fn displacement_set(g: &FiniteGroup, sigma: &Automorphism) -> Vec<usize> {
    let mut out: Vec<usize> = (0..g.order())
        .map(|x| g.mul(g.inv(x), sigma.apply(x)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    /// On failure, a pair (g, h) with h not of the form g^{-1} sigma(g).
    pub witness: Option<(usize, usize)>,
}

/// Validates gamma: nonempty, every member a valid automorphism fixing `h`
/// pointwise, closed under composition. Returns the deduplicated set.
fn validate_gamma(
    g: &FiniteGroup,
    h: &Subgroup,
    gamma: &[Automorphism],
) -> Result<Vec<Automorphism>> {
    if gamma.is_empty() {
        return Err(Error::InvalidGamma("empty automorphism set".into()));
    }
    let mut set: Vec<Automorphism> = gamma.to_vec();
    set.sort();
    set.dedup();
    for a in &set {
        if !a.is_valid_on(g) {
            return Err(Error::InvalidGamma("member is not an automorphism".into()));
        }
        if !a.fixes_pointwise(h) {
            return Err(Error::InvalidGamma(
                "member does not restrict to the identity on the subgroup".into(),
            ));
        }
    }
    for a in &set {
        for b in &set {
            if set.binary_search(&a.compose(b)).is_err() {
                return Err(Error::InvalidGamma(
                    "set is not closed under composition".into(),
                ));
            }
        }
    }
    Ok(set)
}

/// Whether every h in H arises as g^{-1} sigma(g) for every g outside H.
pub fn is_admissible(
    g: &FiniteGroup,
    h: &Subgroup,
    gamma: &[Automorphism],
) -> Result<AdmissibilityVerdict> {
    let set = validate_gamma(g, h, gamma)?;
    for x in 0..g.order() {
        if h.contains(x) {
            continue;
        }
        let displaced: Vec<usize> = set.iter().map(|s| g.mul(g.inv(x), s.apply(x))).collect();
        for &hh in h.elements() {
            if !displaced.contains(&hh) {
                return Ok(AdmissibilityVerdict {
                    admissible: false,
                    witness: Some((x, hh)),
                });
            }
        }
    }
    Ok(AdmissibilityVerdict {
        admissible: true,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceVerdict {
    pub balanced: bool,
    /// Names the first failed clause.
    pub reason: Option<String>,
}

/// Balanced means: admissible, contains all inner automorphisms, and every
/// displacement set is a subgroup.
pub fn is_balanced(
    g: &FiniteGroup,
    h: &Subgroup,
    gamma: &[Automorphism],
) -> Result<BalanceVerdict> {
    let set = validate_gamma(g, h, gamma)?;
    let adm = is_admissible(g, h, &set)?;
    if !adm.admissible {
        return Ok(BalanceVerdict {
            balanced: false,
            reason: Some(format!(
                "not admissible: witness {:?}",
                adm.witness.unwrap()
            )),
        });
    }
    for inner in inner_automorphisms(g) {
        if set.binary_search(&inner).is_err() {
            return Ok(BalanceVerdict {
                balanced: false,
                reason: Some("does not contain all inner automorphisms".into()),
            });
        }
    }
    for s in &set {
        let l = displacement_set(g, s);
        if Subgroup::from_elements(g, &l).is_err() {
            return Ok(BalanceVerdict {
                balanced: false,
                reason: Some("a displacement set is not a subgroup".into()),
            });
        }
    }
    Ok(BalanceVerdict {
        balanced: true,
        reason: None,
    })
}
