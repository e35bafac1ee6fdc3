//! Brute-force sheaves on finite posets: stalks and a map for every
//! comparable pair, sections by solving the compatibility equations
//! directly. Shares only matrix arithmetic with the library.

use std::collections::HashMap;

use indsheaf::linalg::{Field, LinearMap, Scalar};
use indsheaf::sheaf::Sheaf;
use indsheaf::space::{CellMap, Space};

#[derive(Clone, Debug)]
pub struct Brute {
    n: usize,
    leq: Vec<Vec<bool>>,
    field: Field,
    dims: Vec<usize>,
    maps: HashMap<(usize, usize), LinearMap>,
}

/// The order relation of a poset space, closed under transitivity.
pub(crate) fn order(space: &Space) -> Vec<Vec<bool>> {
    let p = space.as_poset().expect("poset");
    let n = p.size();
    let mut leq = vec![vec![false; n]; n];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
    }
    for &(a, b) in p.covers() {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

/// Images of the cells under a poset map.
pub fn table(f: &CellMap) -> Vec<usize> {
    let n = f.source().as_poset().unwrap().size();
    (0..n).map(|c| f.apply(c as i64) as usize).collect()
}

/// A section space: a basis (columns) in `⊕_{c in cells} F_c`.
struct Gamma {
    cells: Vec<usize>,
    offsets: Vec<usize>,
    basis: LinearMap,
}

impl Brute {
    pub fn from_sheaf(f: &Sheaf) -> Brute {
        let leq = order(f.space());
        let n = leq.len();
        let mut maps = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] {
                    maps.insert((a, b), f.map_between(a as i64, b as i64));
                }
            }
        }
        Brute {
            n,
            leq,
            field: f.field(),
            dims: (0..n).map(|c| f.dim(c as i64)).collect(),
            maps,
        }
    }

    fn map(&self, a: usize, b: usize) -> &LinearMap {
        &self.maps[&(a, b)]
    }

    /// Sections over the cells `w`, which must form an up-set.
    fn gamma(&self, w: &[usize]) -> Gamma {
        self.gamma_in(w, w)
    }

    /// Sections over `w` vanishing outside `keep`.
    fn gamma_in(&self, w: &[usize], keep: &[usize]) -> Gamma {
        let mut offsets = vec![0];
        for &c in w {
            offsets.push(offsets.last().unwrap() + self.dims[c]);
        }
        let total = *offsets.last().unwrap();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (i, &a) in w.iter().enumerate() {
            for (j, &b) in w.iter().enumerate() {
                if a == b || !self.leq[a][b] {
                    continue;
                }
                let m = self.map(a, b);
                for r in 0..self.dims[b] {
                    let mut row = vec![self.field.zero(); total];
                    for k in 0..self.dims[a] {
                        row[offsets[i] + k] = m.get(r, k).clone();
                    }
                    row[offsets[j] + r] = row[offsets[j] + r].sub(&self.field.one());
                    rows.push(row);
                }
            }
        }
        for (i, &a) in w.iter().enumerate() {
            if !keep.contains(&a) {
                for k in 0..self.dims[a] {
                    let mut row = vec![self.field.zero(); total];
                    row[offsets[i] + k] = self.field.one();
                    rows.push(row);
                }
            }
        }
        let system = LinearMap::from_scalar_rows(self.field, total, rows).unwrap();
        let basis = system.kernel().inclusion();
        Gamma {
            cells: w.to_vec(),
            offsets,
            basis,
        }
    }

    /// `f_! F`: sections over `f⁻¹ star y` supported where `f` is closed
    /// onto `star y`.
    pub fn push_proper(&self, f: &[usize], target: &Space) -> Brute {
        self.push_with(f, target, true)
    }

    fn push_with(&self, f: &[usize], target: &Space, proper: bool) -> Brute {
        let leq = order(target);
        let m = leq.len();
        let pre = |y: usize| -> Vec<usize> { (0..self.n).filter(|&x| leq[y][f[x]]).collect() };
        let gammas: Vec<Gamma> = (0..m)
            .map(|y| {
                let w = pre(y);
                let keep = if proper {
                    self.closed_part(f, &leq, &w, y)
                } else {
                    w.clone()
                };
                self.gamma_in(&w, &keep)
            })
            .collect();
        let mut maps = HashMap::new();
        for a in 0..m {
            for b in 0..m {
                if leq[a][b] {
                    maps.insert((a, b), restrict(&gammas[a], &gammas[b], self.field));
                }
            }
        }
        Brute {
            n: m,
            leq,
            field: self.field,
            dims: gammas.iter().map(|g| g.basis.domain_dim()).collect(),
            maps,
        }
    }

    /// Union of all down-closed `S ⊆ w` with `f|S` closed onto `star y`:
    /// below every `x ∈ S` each `y' ∈ star y` under `f(x)` is hit from `S`.
    /// Found by trying every subset.
    fn closed_part(&self, f: &[usize], leq_y: &[Vec<bool>], w: &[usize], y: usize) -> Vec<usize> {
        let mut union = vec![false; w.len()];
        for mask in 0u32..(1 << w.len()) {
            let s: Vec<usize> = (0..w.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| w[i])
                .collect();
            let down = s
                .iter()
                .all(|&x| w.iter().all(|&z| !self.leq[z][x] || s.contains(&z)));
            let closed = s.iter().all(|&x| {
                (0..leq_y.len())
                    .filter(|&t| leq_y[y][t] && leq_y[t][f[x]])
                    .all(|t| s.iter().any(|&x2| self.leq[x2][x] && f[x2] == t))
            });
            if down && closed {
                for i in 0..w.len() {
                    union[i] |= mask & (1 << i) != 0;
                }
            }
        }
        (0..w.len()).filter(|&i| union[i]).map(|i| w[i]).collect()
    }

    /// `f⁻¹ G`, `(f⁻¹ G)_x = G_{f(x)}`.
    pub fn pull(&self, f: &[usize], source: &Space) -> Brute {
        let leq = order(source);
        let n = leq.len();
        let mut maps = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] {
                    maps.insert((a, b), self.map(f[a], f[b]).clone());
                }
            }
        }
        Brute {
            n,
            leq,
            field: self.field,
            dims: (0..n).map(|x| self.dims[f[x]]).collect(),
            maps,
        }
    }

    pub fn tensor(&self, other: &Brute) -> Brute {
        let maps = self
            .maps
            .iter()
            .map(|(k, m)| (*k, m.tensor(&other.maps[k])))
            .collect();
        Brute {
            n: self.n,
            leq: self.leq.clone(),
            field: self.field,
            dims: (0..self.n).map(|c| self.dims[c] * other.dims[c]).collect(),
            maps,
        }
    }

    pub fn sections_dim(&self, w: &[usize]) -> usize {
        self.gamma(w).basis.domain_dim()
    }
}

/// Restriction of sections to a smaller up-set, in the two bases.
fn restrict(big: &Gamma, small: &Gamma, field: Field) -> LinearMap {
    let mut proj = LinearMap::zero(
        field,
        *big.offsets.last().unwrap(),
        *small.offsets.last().unwrap(),
    );
    for (j, c) in small.cells.iter().enumerate() {
        let i = big.cells.iter().position(|d| d == c).unwrap();
        for k in 0..small.offsets[j + 1] - small.offsets[j] {
            proj.set(small.offsets[j] + k, big.offsets[i] + k, field.one());
        }
    }
    small
        .basis
        .solve_matrix(&proj.compose(&big.basis).unwrap())
        .unwrap()
}
