//! Finite posets as finite topological spaces.
//!
//! Convention: open sets are the UP-sets. The smallest open neighbourhood of
//! `x` is `U_x = {y : y ≥ x}`, and a point is closed exactly when it is
//! minimal. Continuous maps between such spaces are the monotone maps.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinPoset {
    n: usize,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

impl FinPoset {
    /// Builds the order generated by `covers` and checks that every listed
    /// pair really is a covering relation.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(x, y) in covers {
            if x >= n || y >= n {
                return Err(Error::NotPartialOrder(format!("pair ({x}, {y}) out of range")));
            }
            if x == y {
                return Err(Error::NotCovering(x, y));
            }
            leq[x][y] = true;
        }
        transitive_closure(&mut leq);
        let poset = Self::from_relation_unchecked(n, leq)?;
        for &(x, y) in covers {
            if !poset.covers.contains(&(x, y)) {
                return Err(Error::NotCovering(x, y));
            }
        }
        Ok(poset)
    }

    /// Validates a full relation matrix (`leq[x][y]` iff `x ≤ y`).
    pub fn from_relation(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::NotPartialOrder("relation is not square".into()));
        }
        for x in 0..n {
            if !leq[x][x] {
                return Err(Error::NotPartialOrder(format!("{x} ≤ {x} fails")));
            }
            for y in 0..n {
                for z in 0..n {
                    if leq[x][y] && leq[y][z] && !leq[x][z] {
                        return Err(Error::NotPartialOrder(format!("{x} ≤ {y} ≤ {z} but not {x} ≤ {z}")));
                    }
                }
            }
        }
        Self::from_relation_unchecked(n, leq)
    }

    fn from_relation_unchecked(n: usize, leq: Vec<Vec<bool>>) -> Result<Self> {
        for x in 0..n {
            for y in x + 1..n {
                if leq[x][y] && leq[y][x] {
                    return Err(Error::NotPartialOrder(format!("{x} and {y} form a cycle")));
                }
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x][y] && !(0..n).any(|z| z != x && z != y && leq[x][z] && leq[z][y]) {
                    covers.push((x, y));
                }
            }
        }
        Ok(FinPoset { n, leq, covers })
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("discrete order")
    }

    /// `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers).expect("chain order")
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Covering pairs `(x, y)` with `x ⋖ y`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == x).map(|c| c.1)
    }

    pub fn lower_covers(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == y).map(|c| c.0)
    }

    /// The minimal open neighbourhood `U_x`, sorted.
    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq[x][y]).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.leq[y][x]).collect()
    }

    /// Up-closure of a set of points, sorted.
    pub fn up_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|&y| set.iter().any(|&x| self.leq[x][y])).collect()
    }

    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|&y| set.iter().any(|&x| self.leq[y][x])).collect()
    }

    pub fn is_up_set(&self, set: &[usize]) -> bool {
        normalize(set) == self.up_closure(set)
    }

    pub fn is_down_set(&self, set: &[usize]) -> bool {
        normalize(set) == self.down_closure(set)
    }

    /// Locally closed = open ∩ closed, which for posets means convex.
    pub fn is_locally_closed(&self, set: &[usize]) -> bool {
        let set = normalize(set);
        let up = self.up_closure(&set);
        let down = self.down_closure(&set);
        let both: Vec<usize> = up.into_iter().filter(|x| down.contains(x)).collect();
        both == set
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        self.lower_covers(x).next().is_none()
    }

    /// A chain of covers from `x` up to `y` (inclusive), if `x ≤ y`.
    pub fn cover_path(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        if !self.leq[x][y] {
            return None;
        }
        let mut path = vec![x];
        let mut cur = x;
        while cur != y {
            cur = self
                .upper_covers(cur)
                .find(|&z| self.leq[z][y])
                .expect("a cover below y exists");
            path.push(cur);
        }
        Some(path)
    }

    /// Points ordered so that `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..self.n).collect();
        pts.sort_by_key(|&x| (self.down_set(x).len(), x));
        pts
    }

    /// The induced order on `subset` (sorted); point `i` of the result is
    /// `subset[i]`.
    pub fn induced(&self, subset: &[usize]) -> FinPoset {
        let subset = normalize(subset);
        let leq = subset
            .iter()
            .map(|&x| subset.iter().map(|&y| self.leq[x][y]).collect())
            .collect();
        Self::from_relation_unchecked(subset.len(), leq).expect("induced order")
    }

    /// Is the underlying graph connected (ignoring orientation)?
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..self.n {
                if !seen[y] && (self.leq[x][y] || self.leq[y][x]) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabels points by `perm` (old point `x` becomes `perm[x]`).
    pub fn permute(&self, perm: &[usize]) -> FinPoset {
        let mut leq = vec![vec![false; self.n]; self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                leq[perm[x]][perm[y]] = self.leq[x][y];
            }
        }
        Self::from_relation_unchecked(self.n, leq).expect("permuted order")
    }
}

fn normalize(set: &[usize]) -> Vec<usize> {
    set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn transitive_closure(leq: &mut [Vec<bool>]) {
    let n = leq.len();
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
}

/// A monotone (= continuous) map of finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: FinPoset,
    target: FinPoset,
    image: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: &FinPoset, target: &FinPoset, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.len() {
            return Err(Error::Shape(format!(
                "map has {} images for {} points",
                image.len(),
                source.len()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= target.len()) {
            return Err(Error::Shape(format!("image {bad} out of range")));
        }
        for &(x, y) in source.covers() {
            if !target.leq(image[x], image[y]) {
                return Err(Error::NotMonotone(x, y));
            }
        }
        Ok(MonotoneMap {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub fn identity(p: &FinPoset) -> Self {
        Self::new(p, p, p.points().collect()).expect("identity is monotone")
    }

    pub fn to_point(p: &FinPoset) -> Self {
        Self::new(p, &FinPoset::point(), vec![0; p.len()]).expect("constant map")
    }

    /// Inclusion of a subset with the induced order.
    pub fn inclusion(p: &FinPoset, subset: &[usize]) -> Self {
        let subset = normalize(subset);
        Self::new(&p.induced(&subset), p, subset).expect("inclusion is monotone")
    }

    pub fn source(&self) -> &FinPoset {
        &self.source
    }

    pub fn target(&self) -> &FinPoset {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    /// `f⁻¹(U_y) = {x : f(x) ≥ y}`, an up-set of the source.
    pub fn preimage_of_star(&self, y: usize) -> Vec<usize> {
        self.source
            .points()
            .filter(|&x| self.target.leq(y, self.image[x]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_generate_order() {
        // diamond 0 < 1,2 < 3
        let p = FinPoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
        assert_eq!(p.up_set(1), vec![1, 3]);
        assert!(p.is_connected());
        assert!(matches!(
            FinPoset::from_covers(4, &[(0, 1), (1, 3), (0, 3)]),
            Err(Error::NotCovering(0, 3))
        ));
        assert!(matches!(
            FinPoset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::NotPartialOrder(_))
        ));
    }

    #[test]
    fn up_down_and_locally_closed() {
        let p = FinPoset::chain(3);
        assert!(p.is_up_set(&[1, 2]));
        assert!(!p.is_up_set(&[0, 1]));
        assert!(p.is_down_set(&[0, 1]));
        assert!(p.is_locally_closed(&[1]));
        assert!(!p.is_locally_closed(&[0, 2]));
        assert_eq!(p.cover_path(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(p.cover_path(2, 0), None);
    }

    #[test]
    fn monotone_maps() {
        let c = FinPoset::chain(2);
        let d = FinPoset::discrete(2);
        assert!(MonotoneMap::new(&c, &c, vec![1, 0]).is_err());
        assert!(MonotoneMap::new(&d, &c, vec![1, 0]).is_ok());
        assert!(matches!(
            MonotoneMap::new(&c, &d, vec![0, 1]),
            Err(Error::NotMonotone(0, 1))
        ));
        let f = MonotoneMap::to_point(&c);
        assert_eq!(f.preimage_of_star(0), vec![0, 1]);
    }
}
