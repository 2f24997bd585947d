//! Permutations of `{1..n}`.
//!
//! Points are stored 0-based internally and printed 1-based. Composition is
//! "left argument first": `a.then(&b)` maps `i` to `b(a(i))`. With this
//! convention `sigma_T = sigma_S.then(&sigma_R)`, and the map from words in
//! the modular group generators to permutations is a homomorphism.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a bijection of 1..{0}")]
    NotBijection(usize),
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A bijection of `{0..n}` (printed as `{1..n}`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

/// Multiset of cycle lengths, sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(pub Vec<usize>);

impl CycleType {
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of cycles of the given length.
    pub fn count(&self, len: usize) -> usize {
        self.0.iter().filter(|&&l| l == len).count()
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Build from 0-based images, validating bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from 0-based images without validation.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Build from a 1-based image array (the JSON representation).
    pub fn from_one_based(images: &[u32]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::NotBijection(images.len()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<u32> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    /// Build from 1-based cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p as usize > n || seen[p as usize - 1] {
                    return Err(PermError::NotBijection(n));
                }
                seen[p as usize - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[p as usize - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parse cycle notation such as `"(1 2 6)(3 8 5)(4 9 7)"`.
    ///
    /// Singleton cycles may be present or omitted. When `degree` is `None`
    /// the largest point mentioned is used. `"()"` is the identity.
    pub fn parse(s: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        let bytes = s.as_bytes();
        let mut i = 0;
        let err = |pos: usize, msg: &str| PermError::Parse {
            pos,
            msg: msg.to_string(),
        };
        while i < bytes.len() {
            let b = bytes[i];
            match b {
                b'(' => {
                    if current.is_some() {
                        return Err(err(i, "nested '('"));
                    }
                    current = Some(Vec::new());
                    i += 1;
                }
                b')' => {
                    let c = current.take().ok_or_else(|| err(i, "unmatched ')'"))?;
                    if !c.is_empty() {
                        cycles.push(c);
                    }
                    i += 1;
                }
                b' ' | b'\t' | b'\n' | b'\r' | b',' => i += 1,
                b'0'..=b'9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let c = current
                        .as_mut()
                        .ok_or_else(|| err(start, "point outside of a cycle"))?;
                    let v: u32 = s[start..i]
                        .parse()
                        .map_err(|_| err(start, "point out of range"))?;
                    if v == 0 {
                        return Err(err(start, "points are 1-based"));
                    }
                    c.push(v);
                }
                _ => return Err(err(i, "unexpected character")),
            }
        }
        if current.is_some() {
            return Err(err(bytes.len(), "unterminated cycle"));
        }
        let max = cycles.iter().flatten().copied().max().unwrap_or(1) as usize;
        let n = match degree {
            Some(n) if n < max => {
                return Err(err(0, &format!("point {max} exceeds degree {n}")));
            }
            Some(n) => n,
            None => max,
        };
        Self::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn image(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then(other))
    }

    /// Apply `self` first, then `other`. Panics on degree mismatch.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `g^-1 * self * g`: relabels every point `i` as `g(i)`.
    pub fn conjugate(&self, g: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != g.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), g.degree()));
        }
        Ok(self.conj(g))
    }

    /// Unchecked variant of [`Permutation::conjugate`].
    pub fn conj(&self, g: &Permutation) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[x as usize];
        }
        Permutation { images }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles as 0-based point lists; each starts at its smallest point and
    /// cycles are ordered by smallest point. Fixed points are included.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start as u32;
            while !seen[p as usize] {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.images[p as usize];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(lens)
    }

    /// 0-based fixed points in increasing order.
    pub fn fixed_points(&self) -> Vec<u32> {
        (0..self.degree() as u32)
            .filter(|&i| self.images[i as usize] == i)
            .collect()
    }

    /// Orbits of `<self>`; same as [`Permutation::cycles`] but sorted within.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut cycles = self.cycles();
        for c in &mut cycles {
            c.sort_unstable();
        }
        cycles
    }

    /// Order of the permutation (lcm of the cycle lengths).
    pub fn order(&self) -> u128 {
        self.cycles()
            .iter()
            .fold(1u128, |acc, c| acc.lcm(&(c.len() as u128)))
    }

    /// Transposition swapping 0-based points `i` and `j`.
    pub fn transposition(n: usize, i: u32, j: u32) -> Permutation {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(i as usize, j as usize);
        Permutation { images }
    }
}

/// Whether `<gens>` acts transitively on `n` points.
pub fn is_transitive(gens: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    orbit_of(0, gens, n).len() == n
}

/// Orbit of the 0-based point `p` under `<gens>`, in BFS order.
pub fn orbit_of(p: u32, gens: &[Permutation], n: usize) -> Vec<u32> {
    let mut seen = vec![false; n];
    seen[p as usize] = true;
    let mut orbit = vec![p];
    let mut k = 0;
    while k < orbit.len() {
        let q = orbit[k];
        for g in gens {
            let r = g.image(q);
            if !seen[r as usize] {
                seen[r as usize] = true;
                orbit.push(r);
            }
        }
        k += 1;
    }
    orbit
}

/// Orbits of `<gens>` on `n` points, each sorted, ordered by smallest point.
pub fn group_orbits(gens: &[Permutation], n: usize) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for p in 0..n as u32 {
        if seen[p as usize] {
            continue;
        }
        let mut orb = orbit_of(p, gens, n);
        for &q in &orb {
            seen[q as usize] = true;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for c in self.cycles() {
            if c.len() < 2 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn sigma_t_of_database_example() {
        let s = p("(1 15)(2 12)(3 7)(4 9)(5 13)(6 10)(8 14)(11)", 15);
        let r = p("(1 11 12)(2 13 6)(3 8 15)(4 10 7)(5 14 9)", 15);
        let t = s.compose(&r).unwrap();
        assert_eq!(t, p("(1 3 4 5 6 7 8 9 10 2)(11 12 13 14 15)", 15));
    }

    #[test]
    fn compose_identity_and_involution() {
        let a = p("(1 2 3)(4 5)", 6);
        assert_eq!(a.then(&Permutation::identity(6)), a);
        let t = p("(1 2)", 2);
        assert!(t.then(&t).is_identity());
        assert_eq!(
            a.compose(&Permutation::identity(5)),
            Err(PermError::DegreeMismatch(6, 5))
        );
    }

    #[test]
    fn inverse_and_conjugate() {
        assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));
        assert!(Permutation::identity(4).inverse().is_identity());
        // relabel 2 <-> 3 turns (1 2) into (1 3)
        assert_eq!(p("(1 2)", 3).conjugate(&p("(2 3)", 3)).unwrap(), p("(1 3)", 3));
        let a = p("(1 4 2)(3 5)", 5);
        assert_eq!(a.conjugate(&Permutation::identity(5)).unwrap(), a);
    }

    #[test]
    fn conj_matches_definition() {
        let a = p("(1 4 2)(3 5)", 6);
        let g = p("(1 6 3 2)(4 5)", 6);
        assert_eq!(a.conj(&g), g.inverse().then(&a).then(&g));
    }

    #[test]
    fn cycle_data_of_index_nine_example() {
        let r = p("(1 2 6)(3 8 5)(4 9 7)", 9);
        assert_eq!(r.cycle_type(), CycleType(vec![3, 3, 3]));
        assert!(r.fixed_points().is_empty());
        let s = p("(1)(2 5)(3 7)(4 8)(6 9)", 9);
        assert_eq!(s.fixed_points(), vec![0]);
        assert!(is_transitive(&[s, r], 9));
        assert_eq!(Permutation::identity(5).cycle_type(), CycleType(vec![1; 5]));
    }

    #[test]
    fn transitivity_edge_cases() {
        assert!(!is_transitive(&[Permutation::identity(2)], 2));
        assert!(!is_transitive(&[p("(1 2)", 4), p("(3 4)", 4)], 4));
        assert!(!is_transitive(&[], 2));
        assert!(is_transitive(&[], 1));
    }

    #[test]
    fn parse_and_display() {
        let a = p("(1 2 6)(3 8 5)(4 9 7)", 9);
        assert_eq!(a.to_string(), "(1 2 6)(3 8 5)(4 9 7)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::parse("()", Some(3)).unwrap(), Permutation::identity(3));
        assert_eq!(Permutation::parse("(2 3)", None).unwrap().degree(), 3);
        assert!(matches!(
            Permutation::parse("(1 2", None),
            Err(PermError::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            Permutation::parse("(1 x)", None),
            Err(PermError::Parse { pos: 3, .. })
        ));
        assert!(Permutation::parse("(1 2)(2 3)", None).is_err());
        assert!(Permutation::parse("(5)", Some(3)).is_err());
    }

    #[test]
    fn one_based_round_trip() {
        let a = p("(1 3)(2 4 5)", 5);
        assert_eq!(Permutation::from_one_based(&a.to_one_based()).unwrap(), a);
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn order_and_pow() {
        let a = p("(1 2 3)(4 5)", 5);
        assert_eq!(a.order(), 6);
        assert!(a.pow(6).is_identity());
        assert_eq!(a.pow(-1), a.inverse());
        assert_eq!(a.pow(7), a);
    }
}
