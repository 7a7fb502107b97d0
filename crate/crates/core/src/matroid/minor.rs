use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rref::{Insert, RrefState};

use super::{indices_of, mask_of, Budget, RankTable, RepMatroid};

/// `N` is isomorphic to `(M / contract) \ delete`, with element `i` of `N`
/// sent to element `map[i]` of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub contract: Vec<usize>,
    pub delete: Vec<usize>,
    pub map: Vec<usize>,
}

impl MinorWitness {
    /// Checks the witness by comparing rank functions on every subset of `N`.
    pub fn verify(&self, m: &RepMatroid, n: &RepMatroid) -> bool {
        let k = n.size();
        if self.map.len() != k || k > 20 {
            return false;
        }
        let mut used: Vec<usize> = self
            .contract
            .iter()
            .chain(&self.delete)
            .chain(&self.map)
            .copied()
            .collect();
        used.sort_unstable();
        if used != (0..m.size()).collect::<Vec<_>>() {
            return false;
        }
        let rc = m.rank_of_subset(&self.contract);
        (0u64..1 << k).all(|s| {
            let idx = indices_of(s);
            let mut img = self.contract.clone();
            img.extend(idx.iter().map(|&i| self.map[i]));
            n.rank_of_subset(&idx) == m.rank_of_subset(&img) - rc
        })
    }
}

// counts of (size, rank) over subsets of size <= 3 through one element
type Profile = [[u32; 4]; 4];

fn profile(e: usize, ground: &[usize], rank: &impl Fn(u64) -> usize) -> Profile {
    let mut p = [[0u32; 4]; 4];
    let others: Vec<usize> = ground.iter().copied().filter(|&x| x != e).collect();
    let be = 1u64 << e;
    p[1][rank(be)] += 1;
    for (i, &a) in others.iter().enumerate() {
        let s2 = be | (1 << a);
        p[2][rank(s2)] += 1;
        for &b in &others[i + 1..] {
            p[3][rank(s2 | (1 << b))] += 1;
        }
    }
    p
}

struct Matcher<'a, F: Fn(u64) -> usize> {
    tn: &'a RankTable,
    fm: F,
    cand: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: u64,
}

impl<F: Fn(u64) -> usize> Matcher<'_, F> {
    fn extend(&mut self, i: usize) -> bool {
        if i == self.cand.len() {
            return true;
        }
        for ci in 0..self.cand[i].len() {
            let t = self.cand[i][ci];
            if self.used >> t & 1 == 1 {
                continue;
            }
            self.map[i] = t;
            // every subset of 0..=i that contains i
            let ok = (0u64..1 << i).all(|s| {
                let ns = s | (1 << i);
                let ms = indices_of(s)
                    .iter()
                    .fold(1u64 << t, |acc, &j| acc | (1 << self.map[j]));
                self.tn.rank(ns) == (self.fm)(ms)
            });
            if ok {
                self.used |= 1 << t;
                if self.extend(i + 1) {
                    return true;
                }
                self.used &= !(1 << t);
            }
        }
        false
    }
}

/// An isomorphism from `N` (rank table `tn`) onto the matroid on `ground`
/// with rank function `fm`, if one exists.
fn find_isomorphism(
    tn: &RankTable,
    ground: &[usize],
    fm: impl Fn(u64) -> usize,
) -> Option<Vec<usize>> {
    let k = tn.m();
    if ground.len() != k {
        return None;
    }
    let nr = |s: u64| tn.rank(s);
    let n_ground: Vec<usize> = (0..k).collect();
    let pn: Vec<Profile> = n_ground.iter().map(|&e| profile(e, &n_ground, &nr)).collect();
    let pm: Vec<Profile> = ground.iter().map(|&e| profile(e, ground, &fm)).collect();
    let mut sn = pn.clone();
    let mut sm = pm.clone();
    sn.sort_unstable();
    sm.sort_unstable();
    if sn != sm {
        return None;
    }
    let cand: Vec<Vec<usize>> = pn
        .iter()
        .map(|p| {
            ground
                .iter()
                .zip(&pm)
                .filter(|(_, q)| *q == p)
                .map(|(&g, _)| g)
                .collect()
        })
        .collect();
    let mut m = Matcher {
        tn,
        fm,
        cand,
        map: vec![0; k],
        used: 0,
    };
    m.extend(0).then_some(m.map)
}

impl RepMatroid {
    /// Searches for `N` as a minor. Uses `C` independent with
    /// `|C| = r(M) - r(N)` and a spanning `R ∪ C`; the minor is then
    /// `(M / C)|R`. Exhaustive, so limited to `budget.minor_max_m` elements
    /// apart from the empty and U_{1,2} cases.
    pub fn has_minor(&self, n: &RepMatroid, budget: &Budget) -> Result<Option<MinorWitness>> {
        if n.rank() > self.rank() || n.corank() > self.corank() {
            return Ok(None);
        }
        if n.size() == 0 {
            return Ok(Some(self.empty_minor()));
        }
        if n.size() == 2 && n.rank() == 1 && !n.has_loop() {
            return Ok(self.u12_minor());
        }
        let m = self.size();
        if m > budget.minor_max_m {
            return Err(Error::budget(
                "minor search",
                m as u128,
                budget.minor_max_m as u128,
            ));
        }
        let tm = RankTable::build(self, budget)?;
        let tn = RankTable::build(n, budget)?;
        let rm = self.rank();
        let c = rm - n.rank();
        let k = n.size();
        let full = tm.full();
        for cmask in 0..=full {
            if cmask.count_ones() as usize != c || tm.rank(cmask) != c {
                continue;
            }
            let rest = full & !cmask;
            // submasks of `rest` with k elements
            let mut r = rest;
            loop {
                if r.count_ones() as usize == k && tm.rank(r | cmask) == rm {
                    let ground = indices_of(r);
                    let fm = |s: u64| tm.rank(s | cmask) - c;
                    if let Some(map) = find_isomorphism(&tn, &ground, fm) {
                        return Ok(Some(MinorWitness {
                            contract: indices_of(cmask),
                            delete: indices_of(rest & !r),
                            map,
                        }));
                    }
                }
                if r == 0 {
                    break;
                }
                r = (r - 1) & rest;
            }
        }
        Ok(None)
    }

    fn empty_minor(&self) -> MinorWitness {
        let mut st = RrefState::new(self.field(), self.matrix().n(), false);
        let (mut contract, mut delete) = (Vec::new(), Vec::new());
        for (j, col) in self.matrix().columns().enumerate() {
            match st.insert(col) {
                Insert::Independent { .. } => contract.push(j),
                Insert::Dependent(_) => delete.push(j),
            }
        }
        MinorWitness {
            contract,
            delete,
            map: Vec::new(),
        }
    }

    /// U_{1,2} is a minor iff the non-loop elements are dependent. A
    /// fundamental circuit `S` gives it as `(M / (S - {e, f}))|{e, f}`.
    fn u12_minor(&self) -> Option<MinorWitness> {
        let a = self.matrix();
        let nonloops: Vec<usize> = (0..a.m())
            .filter(|&j| a.col(j).iter().any(|&x| x != 0))
            .collect();
        let mut st = RrefState::new(self.field(), a.n(), true);
        for (pos, &j) in nonloops.iter().enumerate() {
            if let Insert::Dependent(Some(kv)) = st.insert(a.col(j)) {
                let support: Vec<usize> = kv
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, _)| nonloops[i])
                    .collect();
                debug_assert!(support.len() >= 2 && support.contains(&nonloops[pos]));
                let (e, f) = (support[0], support[1]);
                let contract: Vec<usize> = support[2..].to_vec();
                let keep = mask_of(&support);
                let delete = (0..a.m()).filter(|&x| keep >> x & 1 == 0).collect();
                return Some(MinorWitness {
                    contract,
                    delete,
                    map: vec![e, f],
                });
            }
        }
        None
    }
}
