//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's order or refutability code.
#![allow(dead_code)]

use rand::Rng;
use testability::order::{build_model, Requirement, SystemModel};
use testability::setup::TestSetup;

/// A bounded poset kept as an explicit reflexive-transitive relation.
/// Element 0 is bottom and the last element is top.
#[derive(Clone, Debug)]
pub struct Poset {
    pub names: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
    pub leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn random(rng: &mut impl Rng, min: usize, max: usize) -> Poset {
        let n = rng.gen_range(min..=max);
        let density = rng.gen_range(0.0..0.8);
        let mut pairs = Vec::new();
        for j in 1..n {
            pairs.push((0, j));
        }
        for i in 1..n - 1 {
            pairs.push((i, n - 1));
            for j in i + 1..n - 1 {
                if rng.gen_bool(density) {
                    pairs.push((i, j));
                }
            }
        }
        Poset::from_pairs(n, pairs)
    }

    pub fn from_pairs(n: usize, pairs: Vec<(usize, usize)>) -> Poset {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &pairs {
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
        Poset {
            names: (0..n).map(|i| format!("p{i}")).collect(),
            pairs,
            leq,
        }
    }

    pub fn model(&self) -> SystemModel {
        let pairs: Vec<(&str, &str)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (self.names[a].as_str(), self.names[b].as_str()))
            .collect();
        build_model(
            self.names.iter().map(String::as_str),
            pairs,
            &self.names[0],
            &self.names[self.len() - 1],
        )
        .expect("acyclic by construction")
    }

    pub fn up_closed(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|i| !set[i] || (0..self.len()).all(|j| !self.leq[i][j] || set[j]))
    }

    pub fn down_closed(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|i| !set[i] || (0..self.len()).all(|j| !self.leq[j][i] || set[j]))
    }

    pub fn up(&self, set: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|j| (0..self.len()).any(|i| set[i] && self.leq[i][j]))
            .collect()
    }

    pub fn down(&self, set: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|j| (0..self.len()).any(|i| set[i] && self.leq[j][i]))
            .collect()
    }

    pub fn random_set(&self, rng: &mut impl Rng) -> Vec<bool> {
        let p = rng.gen_range(0.0..0.6);
        let seed: Vec<bool> = (0..self.len()).map(|_| rng.gen_bool(p)).collect();
        match rng.gen_range(0..3) {
            0 => (0..self.len()).map(|_| rng.gen_bool(0.5)).collect(),
            1 => self.up(&seed),
            _ => self.down(&seed),
        }
    }

    pub fn requirement(&self, model: &SystemModel, name: &str, set: &[bool]) -> Requirement {
        let ids = (0..self.len())
            .filter(|&i| set[i])
            .map(|i| self.names[i].as_str());
        Requirement::new(model, name, ids).expect("declared names")
    }

    /// Library element index for each poset element.
    pub fn indices(&self, model: &SystemModel) -> Vec<usize> {
        self.names
            .iter()
            .map(|n| model.element(n).unwrap())
            .collect()
    }
}

/// A setup as an explicit table: `alpha[s][t]` says whether `s` can yield `t`.
#[derive(Clone, Debug)]
pub struct Table {
    pub alpha: Vec<Vec<bool>>,
}

impl Table {
    pub fn observations(&self) -> usize {
        self.alpha.first().map_or(0, Vec::len)
    }

    /// Each observation is produced by exactly the members of a random up-set.
    pub fn random(rng: &mut impl Rng, p: &Poset) -> Table {
        if rng.gen_bool(0.15) {
            return Table::reflexive(p);
        }
        let m = rng.gen_range(1..=6);
        let producers: Vec<Vec<bool>> = (0..m)
            .map(|_| {
                let seed: Vec<bool> = (0..p.len()).map(|_| rng.gen_bool(0.3)).collect();
                p.up(&seed)
            })
            .collect();
        Table {
            alpha: (0..p.len())
                .map(|s| (0..m).map(|t| producers[t][s]).collect())
                .collect(),
        }
    }

    /// Observations are systems; `S` yields every refinement of itself.
    pub fn reflexive(p: &Poset) -> Table {
        Table {
            alpha: (0..p.len())
                .map(|s| (0..p.len()).map(|t| p.leq[t][s]).collect())
                .collect(),
        }
    }

    pub fn setup(&self, p: &Poset, model: &SystemModel) -> TestSetup {
        let idx = p.indices(model);
        let mut rows = vec![Vec::new(); model.len()];
        for s in 0..p.len() {
            rows[idx[s]] = (0..self.observations())
                .filter(|&t| self.alpha[s][t])
                .collect();
        }
        let obs = (0..self.observations()).map(|t| format!("o{t}")).collect();
        TestSetup::from_indices("table", model, obs, rows).expect("monotone by construction")
    }

    fn hat(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.alpha.len()).filter(move |&s| self.alpha[s][t])
    }

    fn irremediable(&self, t: usize, r: &[bool]) -> bool {
        self.hat(t).all(|s| !r[s])
    }

    pub fn refutable(&self, r: &[bool]) -> bool {
        (0..self.alpha.len())
            .filter(|&s| !r[s])
            .all(|s| (0..self.observations()).any(|t| self.alpha[s][t] && self.irremediable(t, r)))
    }

    pub fn verifiable(&self, r: &[bool]) -> bool {
        (0..self.alpha.len()).filter(|&s| r[s]).all(|s| {
            (0..self.observations()).any(|t| self.alpha[s][t] && self.hat(t).all(|x| r[x]))
        })
    }

    pub fn refutable_under(&self, r: &[bool], a: &[bool]) -> bool {
        let both: Vec<bool> = r.iter().zip(a).map(|(x, y)| *x && *y).collect();
        (0..self.alpha.len()).filter(|&s| a[s] && !r[s]).all(|s| {
            (0..self.observations()).any(|t| self.alpha[s][t] && self.irremediable(t, &both))
        })
    }

    /// `{ S | α(S) ∩ W = ∅ }`.
    pub fn avoiding(&self, w: &[bool]) -> Vec<bool> {
        self.alpha
            .iter()
            .map(|row| row.iter().zip(w).all(|(x, y)| !(*x && *y)))
            .collect()
    }
}

/// Members of a library requirement, in poset order.
pub fn members(p: &Poset, model: &SystemModel, r: &Requirement) -> Vec<bool> {
    p.indices(model)
        .into_iter()
        .map(|e| r.contains(e))
        .collect()
}
