//! Base and strong generating sets via the deterministic Schreier-Sims
//! algorithm.

use num_bigint::BigUint;

use crate::perm::Permutation;

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    /// Indices into `Bsgs::strong` of generators fixing all earlier base points.
    gens: Vec<usize>,
    /// Orbit of `base_point` under `gens`, in discovery order.
    orbit: Vec<u32>,
    /// `transversal[p]` maps `base_point` to `p`, for `p` in the orbit.
    transversal: Vec<Option<Permutation>>,
}

/// A stabilizer chain for a permutation group on `n` points.
#[derive(Clone, Debug)]
pub struct Bsgs {
    n: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl Bsgs {
    /// Schreier-Sims with the base starting at `prefix` (0-based points).
    pub fn new(gens: &[Permutation], n: usize, prefix: &[u32]) -> Bsgs {
        let mut bsgs = Bsgs {
            n,
            strong: Vec::new(),
            levels: Vec::new(),
        };
        for &b in prefix {
            bsgs.push_level(b);
        }
        for g in gens {
            debug_assert_eq!(g.degree(), n);
            if g.is_identity() || bsgs.strong.contains(g) {
                continue;
            }
            bsgs.add_strong(g.clone(), 0);
        }
        for lvl in 0..bsgs.levels.len() {
            bsgs.rebuild_orbit(lvl);
        }
        bsgs.complete();
        bsgs
    }

    fn push_level(&mut self, b: u32) {
        self.levels.push(Level {
            base_point: b,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: Vec::new(),
        });
    }

    /// Register `g` as a strong generator for levels `from..=depth(g)`,
    /// extending the base when `g` fixes every base point.
    fn add_strong(&mut self, g: Permutation, from: usize) -> usize {
        let idx = self.strong.len();
        let mut lvl = from;
        loop {
            if lvl == self.levels.len() {
                let moved = (0..self.n as u32)
                    .find(|&p| g.image(p) != p)
                    .expect("identity passed as strong generator");
                self.push_level(moved);
            }
            self.levels[lvl].gens.push(idx);
            let b = self.levels[lvl].base_point;
            if g.image(b) != b {
                break;
            }
            lvl += 1;
        }
        self.strong.push(g);
        lvl
    }

    fn rebuild_orbit(&mut self, lvl: usize) {
        let n = self.n;
        let level = &self.levels[lvl];
        let b = level.base_point;
        let mut transversal: Vec<Option<Permutation>> = vec![None; n];
        transversal[b as usize] = Some(Permutation::identity(n));
        let mut orbit = vec![b];
        let mut k = 0;
        while k < orbit.len() {
            let p = orbit[k];
            for &gi in &level.gens {
                let g = &self.strong[gi];
                let q = g.image(p);
                if transversal[q as usize].is_none() {
                    let u = transversal[p as usize].as_ref().unwrap().then(g);
                    transversal[q as usize] = Some(u);
                    orbit.push(q);
                }
            }
            k += 1;
        }
        let level = &mut self.levels[lvl];
        level.orbit = orbit;
        level.transversal = transversal;
    }

    /// Sift `g` through levels `from..`. Returns the residue and the level
    /// at which sifting stopped (`levels.len()` when it passed every level).
    fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for lvl in from..self.levels.len() {
            let level = &self.levels[lvl];
            let beta = h.image(level.base_point);
            match &level.transversal[beta as usize] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, lvl),
            }
        }
        (h, self.levels.len())
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'levels: while i >= 0 {
            let lvl = i as usize;
            let orbit = self.levels[lvl].orbit.clone();
            let gens = self.levels[lvl].gens.clone();
            for &beta in &orbit {
                for &gi in &gens {
                    let s = &self.strong[gi];
                    let u_beta = self.levels[lvl].transversal[beta as usize].as_ref().unwrap();
                    let img = s.image(beta);
                    let u_img = self.levels[lvl].transversal[img as usize].as_ref().unwrap();
                    let schreier = u_beta.then(s).then(&u_img.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip(&schreier, lvl + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        let top = self.add_strong(h, lvl + 1);
                        for l in lvl + 1..=top {
                            self.rebuild_orbit(l);
                        }
                        i = top as isize;
                        continue 'levels;
                    }
                }
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Generators of the pointwise stabilizer of the first `lvl` base points.
    pub fn stabilizer_generators(&self, lvl: usize) -> Vec<Permutation> {
        if lvl >= self.levels.len() {
            return Vec::new();
        }
        self.levels[lvl]
            .gens
            .iter()
            .map(|&i| self.strong[i].clone())
            .collect()
    }

    /// Orbit of the `lvl`-th base point under the corresponding stabilizer.
    pub fn basic_orbit(&self, lvl: usize) -> &[u32] {
        &self.levels[lvl].orbit
    }

    /// Element of the `lvl`-th stabilizer mapping the base point to `p`.
    pub fn transversal_element(&self, lvl: usize, p: u32) -> Option<&Permutation> {
        self.levels[lvl].transversal[p as usize].as_ref()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order as `u128`; `None` on overflow.
    pub fn order_u128(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len() as u128))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.n {
            return false;
        }
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Every element of the group. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.n)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &p in &level.orbit {
                let u = level.transversal[p as usize].as_ref().unwrap();
                for g in &out {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out
    }
}
