//! Weyl dimensions and invariant subalgebras for compact connected Lie groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

type Q = Ratio<i64>;

pub const MAX_CLASSICAL_RANK: usize = 8;
/// Largest number of nontrivial factors for which subsets are listed.
pub const MAX_NONTRIVIAL_FACTORS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
}

/// Positive roots in an orthogonal coordinate model, reduced to the integer
/// table `c[α][j] = 2⟨α, ωⱼ⟩ / ⟨α, α⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub positive_roots: Vec<Vec<Q>>,
    pub fundamental_weights: Vec<Vec<Q>>,
    pub weyl_rho: Vec<Q>,
    coroot_pairings: Vec<Vec<i64>>,
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[Q], s: Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `e₁ + … + eₖ` in `n` coordinates.
fn prefix(n: usize, k: usize) -> Vec<Q> {
    (0..n)
        .map(|i| if i < k { Q::one() } else { Q::zero() })
        .collect()
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let half = Q::new(1, 2);
        let (roots, weights) = match family {
            Family::A => {
                check_rank(family, rank, 1)?;
                let n = rank + 1;
                let mut roots = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        roots.push(sub(&unit(n, i), &unit(n, j)));
                    }
                }
                (roots, (1..=rank).map(|k| prefix(n, k)).collect::<Vec<_>>())
            }
            Family::B | Family::C | Family::D => {
                let min = if family == Family::D { 3 } else { 2 };
                check_rank(family, rank, min)?;
                let n = rank;
                let mut roots = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        roots.push(sub(&unit(n, i), &unit(n, j)));
                        roots.push(add(&unit(n, i), &unit(n, j)));
                    }
                    match family {
                        Family::B => roots.push(unit(n, i)),
                        Family::C => roots.push(scale(&unit(n, i), Q::from_integer(2))),
                        _ => {}
                    }
                }
                let mut weights: Vec<Vec<Q>> = (1..=n).map(|k| prefix(n, k)).collect();
                match family {
                    Family::B => weights[n - 1] = scale(&prefix(n, n), half),
                    Family::D => {
                        let mut spin_minus = scale(&prefix(n, n), half);
                        spin_minus[n - 1] = -half;
                        weights[n - 2] = spin_minus;
                        weights[n - 1] = scale(&prefix(n, n), half);
                    }
                    _ => {}
                }
                (roots, weights)
            }
            Family::G2 => {
                if rank != 2 {
                    return Err(Error::InvalidInput(format!("G2 has rank 2, not {rank}")));
                }
                let v = |a: i64, b: i64, c: i64| {
                    vec![Q::from_integer(a), Q::from_integer(b), Q::from_integer(c)]
                };
                let a1 = v(1, -1, 0);
                let a2 = v(-2, 1, 1);
                let combo = |p: i64, q: i64| {
                    add(
                        &scale(&a1, Q::from_integer(p)),
                        &scale(&a2, Q::from_integer(q)),
                    )
                };
                let roots = vec![
                    combo(1, 0),
                    combo(0, 1),
                    combo(1, 1),
                    combo(2, 1),
                    combo(3, 1),
                    combo(3, 2),
                ];
                (roots, vec![v(0, -1, 1), v(-1, -1, 2)])
            }
        };
        let rho = roots
            .iter()
            .fold(vec![Q::zero(); roots[0].len()], |acc, r| add(&acc, r));
        let rho = scale(&rho, half);
        let mut pairings = Vec::with_capacity(roots.len());
        for r in &roots {
            let norm = dot(r, r);
            let row: Vec<i64> = weights
                .iter()
                .map(|w| {
                    let p = Q::from_integer(2) * dot(r, w) / norm;
                    if !p.is_integer() {
                        return Err(Error::AssertionFailure(format!(
                            "non-integral coroot pairing in {family:?}{rank}"
                        )));
                    }
                    Ok(p.to_integer())
                })
                .collect::<Result<_>>()?;
            pairings.push(row);
        }
        let sys = RootSystem {
            family,
            rank,
            positive_roots: roots,
            fundamental_weights: weights,
            weyl_rho: rho,
            coroot_pairings: pairings,
        };
        sys.check_invariants()?;
        Ok(sys)
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.rank;
        let expected = match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::G2 => 6,
        };
        if self.positive_roots.len() != expected {
            return Err(Error::AssertionFailure(format!(
                "{self}: {} positive roots, expected {expected}",
                self.positive_roots.len()
            )));
        }
        if self
            .positive_roots
            .iter()
            .any(|a| dot(a, &self.weyl_rho) <= Q::zero())
        {
            return Err(Error::AssertionFailure(format!(
                "{self}: a positive root pairs nonpositively with ρ"
            )));
        }
        Ok(())
    }

    /// `2⟨α, ωⱼ⟩ / ⟨α, α⟩` for each positive root `α`.
    pub fn coroot_pairings(&self) -> &[Vec<i64>] {
        &self.coroot_pairings
    }
}

fn check_rank(family: Family, rank: usize, min: usize) -> Result<()> {
    if rank < min || rank > MAX_CLASSICAL_RANK {
        return Err(Error::InvalidInput(format!(
            "{family:?} requires rank in {min}..={MAX_CLASSICAL_RANK}, got {rank}"
        )));
    }
    Ok(())
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::G2 => write!(f, "G2"),
            fam => write!(f, "{fam:?}{}", self.rank),
        }
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    /// `A3`, `B2`, `C4`, `D4`, `G2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("unknown simple type {s:?}"));
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'G' => Family::G2,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        RootSystem::new(family, rank)
    }
}

/// Dominant integral weight in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HighestWeight {
    pub coords: Vec<u64>,
}

impl HighestWeight {
    pub fn new(coords: Vec<u64>) -> Self {
        HighestWeight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        HighestWeight {
            coords: vec![0; rank],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn plus(&self, other: &HighestWeight) -> HighestWeight {
        HighestWeight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn check_weight(sys: &RootSystem, w: &HighestWeight) -> Result<()> {
    if w.coords.len() != sys.rank {
        return Err(Error::DimensionMismatch(format!(
            "{sys} needs {} weight coordinates, got {}",
            sys.rank,
            w.coords.len()
        )));
    }
    Ok(())
}

/// Product of integers, exact, with a 128-bit fast path.
fn product(factors: impl Iterator<Item = u64> + Clone) -> BigUint {
    let mut acc: u128 = 1;
    for f in factors.clone() {
        match acc.checked_mul(f as u128) {
            Some(v) => acc = v,
            None => return factors.fold(BigUint::one(), |p, f| p * BigUint::from(f)),
        }
    }
    BigUint::from(acc)
}

/// `dim V(λ) = ∏_{α>0} ⟨α∨, λ+ρ⟩ / ⟨α∨, ρ⟩`.
pub fn weyl_dim(sys: &RootSystem, lambda: &HighestWeight) -> Result<BigUint> {
    check_weight(sys, lambda)?;
    let pair = |row: &[i64], shift: u64| -> u64 {
        row.iter()
            .zip(&lambda.coords)
            .map(|(&c, &l)| c as u64 * (l * shift + 1))
            .sum()
    };
    let num = product(sys.coroot_pairings.iter().map(|row| pair(row, 1)));
    let den = product(sys.coroot_pairings.iter().map(|row| pair(row, 0)));
    if den.is_zero() || !(&num % &den).is_zero() {
        return Err(Error::NonIntegerDimension(format!(
            "{num}/{den} for {sys} at {:?}",
            lambda.coords
        )));
    }
    Ok(num / den)
}

/// Whether `V(λ) ⊗ V(μ)` is irreducible, i.e. `dim V(λ+μ) = dim V(λ)·dim V(μ)`.
/// This holds exactly when `λ = 0` or `μ = 0`; any disagreement is an error.
pub fn tensor_irreducible(
    sys: &RootSystem,
    lambda: &HighestWeight,
    mu: &HighestWeight,
) -> Result<bool> {
    let lhs = weyl_dim(sys, &lambda.plus(mu))?;
    let rhs = weyl_dim(sys, lambda)? * weyl_dim(sys, mu)?;
    let irreducible = lhs == rhs;
    if irreducible != (lambda.is_zero() || mu.is_zero()) {
        return Err(Error::AssertionFailure(format!(
            "{sys}: tensor criterion disagrees at {:?}, {:?}",
            lambda.coords, mu.coords
        )));
    }
    Ok(irreducible)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtingofSubalgebra {
    /// Indices `J ⊆ I` of the factors whose endomorphism algebras are kept.
    pub subset: Vec<usize>,
    /// `(∏_{j∈J} dim V(λⱼ))²`.
    pub dim: BigUint,
    /// Position of the subalgebra for `I ∖ J` (its centralizer).
    pub dual: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtingofClassification {
    pub factor_dims: Vec<BigUint>,
    /// `I`: factors with nonzero highest weight.
    pub nontrivial: Vec<usize>,
    pub subalgebras: Vec<EtingofSubalgebra>,
    /// Invariant subalgebras plus the zero subalgebra: `2^|I| + 1`.
    pub total: BigUint,
}

/// Invariant subalgebras of `End(V(λ₁) ⊠ … ⊠ V(λₛ))`: one `End` of the
/// partial tensor product for every subset of the nontrivial factors.
pub fn etingof_enumerate(factors: &[(RootSystem, HighestWeight)]) -> Result<EtingofClassification> {
    let factor_dims: Vec<BigUint> = factors
        .iter()
        .map(|(s, w)| weyl_dim(s, w))
        .collect::<Result<_>>()?;
    let nontrivial: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, (_, w))| !w.is_zero())
        .map(|(i, _)| i)
        .collect();
    let k = nontrivial.len();
    if k > MAX_NONTRIVIAL_FACTORS {
        return Err(Error::CapExceeded {
            what: "nontrivial Lie factors",
            size: k,
            cap: MAX_NONTRIVIAL_FACTORS,
        });
    }
    let full = (1usize << k) - 1;
    let subalgebras = (0..=full)
        .map(|mask| {
            let subset: Vec<usize> = (0..k)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| nontrivial[b])
                .collect();
            let root: BigUint = subset.iter().map(|&i| factor_dims[i].clone()).product();
            EtingofSubalgebra {
                subset,
                dim: &root * &root,
                dual: full ^ mask,
            }
        })
        .collect();
    Ok(EtingofClassification {
        factor_dims,
        nontrivial,
        subalgebras,
        total: (BigUint::one() << k) + 1u32,
    })
}

/// Parse `A1xA1` into simple systems.
pub fn parse_type(s: &str) -> Result<Vec<RootSystem>> {
    s.split(['x', 'X', '×']).map(RootSystem::from_str).collect()
}

/// Parse `[1];[1,0]` into one weight per factor.
pub fn parse_weights(s: &str) -> Result<Vec<HighestWeight>> {
    s.split(';')
        .map(|part| {
            let inner = part.trim().trim_start_matches('[').trim_end_matches(']');
            let coords = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|x| {
                        x.trim().parse::<u64>().map_err(|_| {
                            Error::InvalidInput(format!("bad weight coordinate {x:?}"))
                        })
                    })
                    .collect::<Result<_>>()?
            };
            Ok(HighestWeight::new(coords))
        })
        .collect()
}

/// Pair parsed systems with parsed weights, checking lengths.
pub fn parse_factors(types: &str, weights: &str) -> Result<Vec<(RootSystem, HighestWeight)>> {
    let systems = parse_type(types)?;
    let weights = parse_weights(weights)?;
    if systems.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} simple factors but {} weights",
            systems.len(),
            weights.len()
        )));
    }
    for (s, w) in systems.iter().zip(&weights) {
        check_weight(s, w)?;
    }
    Ok(systems.into_iter().zip(weights).collect())
}
