//! Finite root systems attached to the affine diagrams, with exact inner
//! products, root enumeration by reflection closure, and the standard affine
//! extension of the bilinear form (level/delta pairing).

use crate::exactmat::{IntMatrix, Rat, RatMatrix};
use crate::mckay::GammaDescriptor;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Finite weight recorded by its pairings with the simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteWeight {
    pub fund: Vec<Rat>,
}

/// Affine weight `level * Lambda_0 + finite + delta_coeff * delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineWeight {
    pub level: Rat,
    pub finite: FiniteWeight,
    pub delta_coeff: Rat,
}

/// Real affine root `alpha + m * delta`, the finite part in simple-root
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineRoot {
    pub finite: Vec<i64>,
    pub m: i64,
}

impl AffineRoot {
    /// Positive as an affine root: positive delta degree, or degree zero and
    /// positive finite part.
    pub fn is_positive(&self) -> bool {
        match self.m.cmp(&0) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => root_coords_positive(&self.finite),
        }
    }

    pub fn negated(&self) -> Self {
        AffineRoot { finite: self.finite.iter().map(|v| -v).collect(), m: -self.m }
    }
}

/// Positive in simple-root coordinates: nonzero with all coordinates >= 0.
pub fn root_coords_positive(coords: &[i64]) -> bool {
    coords.iter().all(|&c| c >= 0) && coords.iter().any(|&c| c != 0)
}

/// The finite root system of a diagram, with cached form data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    cartan: IntMatrix,
    cartan_inv: Option<RatMatrix>,
    roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(g: &GammaDescriptor) -> Self {
        let cartan = g.affine_diagram().finite_cartan();
        Self::from_cartan(cartan)
    }

    pub fn from_cartan(cartan: IntMatrix) -> Self {
        let rank = cartan.rows();
        let cartan_inv = if rank > 0 { Some(cartan.to_rational().invert().expect("finite Cartan matrices are invertible")) } else { None };
        let roots = enumerate_roots(&cartan);
        RootSystem { rank, cartan, cartan_inv, roots }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    /// All roots in simple-root coordinates, lexicographically sorted.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.roots.iter().filter(|r| root_coords_positive(r))
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.roots.iter().any(|r| r == coords)
    }

    pub fn highest_root(&self) -> Result<Vec<i64>> {
        self.positive_roots()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .ok_or(Error::TrivialGroup)
    }

    /// Bilinear form on the root lattice, normalized so roots have norm 2.
    pub fn form_roots(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                let c: i64 = self.cartan.get(i, j).try_into().expect("small Cartan entry");
                acc += a[i] * c * b[j];
            }
        }
        acc
    }

    pub fn root_norm(&self, a: &[i64]) -> i64 {
        self.form_roots(a, a)
    }

    /// Pairings with the simple roots of a root-lattice element.
    pub fn fund_from_root(&self, a: &[i64]) -> Vec<Rat> {
        (0..self.rank)
            .map(|i| {
                let mut acc = 0i64;
                for j in 0..self.rank {
                    let c: i64 = self.cartan.get(i, j).try_into().expect("small Cartan entry");
                    acc += c * a[j];
                }
                Rat::from_integer(acc.into())
            })
            .collect()
    }

    /// Simple-root coordinates of a weight given by simple pairings.
    pub fn root_from_fund(&self, fund: &[Rat]) -> Result<Vec<Rat>> {
        match &self.cartan_inv {
            None => Ok(vec![]),
            Some(inv) => inv.mul_vec(fund),
        }
    }

    /// Form of two weights given by simple pairings.
    pub fn form_fund(&self, a: &FiniteWeight, b: &FiniteWeight) -> Result<Rat> {
        if a.fund.len() != self.rank || b.fund.len() != self.rank {
            return Err(Error::DimensionMismatch("weight length vs rank".into()));
        }
        let bc = self.root_from_fund(&b.fund)?;
        Ok(a.fund.iter().zip(&bc).map(|(x, y)| x * y).sum())
    }

    /// Mixed form: weight by simple pairings against a root-lattice element.
    pub fn form_fund_root(&self, a: &FiniteWeight, b: &[i64]) -> Rat {
        a.fund.iter().zip(b).map(|(x, &y)| x * Rat::from_integer(y.into())).sum()
    }

    pub fn is_dominant(&self, w: &FiniteWeight) -> bool {
        w.fund.iter().all(|p| p >= &Rat::zero())
    }

    /// Affine form: (Lambda_0, Lambda_0) = 0, (Lambda_0, delta) = 1,
    /// (delta, delta) = 0, finite part orthogonal to both.
    pub fn form_affine(&self, a: &AffineWeight, b: &AffineWeight) -> Result<Rat> {
        let fin = self.form_fund(&a.finite, &b.finite)?;
        Ok(&a.level * &b.delta_coeff + &b.level * &a.delta_coeff + fin)
    }

    /// Pairing of an affine weight with a real affine root.
    pub fn pair_affine_root(&self, w: &AffineWeight, r: &AffineRoot) -> Rat {
        self.form_fund_root(&w.finite, &r.finite) + &w.level * Rat::from_integer(r.m.into())
    }
}

fn enumerate_roots(cartan: &IntMatrix) -> Vec<Vec<i64>> {
    let n = cartan.rows();
    if n == 0 {
        return vec![];
    }
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        set.insert(e.clone());
        queue.push(e);
    }
    while let Some(beta) = queue.pop() {
        for j in 0..n {
            // s_j(beta) = beta - <beta, alpha_j> alpha_j
            let mut pairing = 0i64;
            for i in 0..n {
                let c: i64 = cartan.get(j, i).try_into().expect("small Cartan entry");
                pairing += c * beta[i];
            }
            let mut img = beta.clone();
            img[j] -= pairing;
            if set.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    set.into_iter().collect()
}
