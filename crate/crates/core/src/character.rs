//! Class functions and the irreducible character table.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{self, CMat, ZERO};
use crate::{EIGEN_GAP, MAX_RETRIES, ROUNDING_TOL};

/// Values of a class function, one per conjugacy class in the order of
/// `FiniteGroup::conjugacy_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        ClassFunction { values }
    }

    pub fn degree(&self) -> f64 {
        self.values[0].re
    }

    pub fn approx_eq(&self, other: &ClassFunction, tol: f64) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Value at a group element.
    pub fn at(&self, group: &FiniteGroup, g: usize) -> Complex64 {
        self.values[group.class_of(g)]
    }

    /// Pointwise product.
    pub fn product(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }
}

/// `⟨a, b⟩ = |G|⁻¹ Σ_g conj(a(g)) b(g)`.
pub fn inner_product(group: &FiniteGroup, a: &ClassFunction, b: &ClassFunction) -> Complex64 {
    let sum: Complex64 = group
        .conjugacy_classes()
        .iter()
        .enumerate()
        .map(|(k, class)| a.values[k].conj() * b.values[k] * class.len() as f64)
        .sum();
    sum / group.order() as f64
}

/// Round a character sum to the nearest integer.
pub fn round_integer(z: Complex64) -> Result<i64> {
    let r = z.re.round();
    if (z - Complex64::new(r, 0.0)).norm() <= ROUNDING_TOL {
        Ok(r as i64)
    } else {
        Err(Error::RoundingAmbiguous {
            value: format!("{z}"),
        })
    }
}

/// Multiplicity `⟨a, b⟩` rounded to a nonnegative integer.
pub fn multiplicity(group: &FiniteGroup, a: &ClassFunction, b: &ClassFunction) -> Result<usize> {
    let m = round_integer(inner_product(group, a, b))?;
    usize::try_from(m).map_err(|_| Error::RoundingAmbiguous {
        value: format!("{m}"),
    })
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub characters: Vec<ClassFunction>,
}

impl CharacterTable {
    /// Split the regular representation with a random Hermitian element of
    /// its commutant and read characters off the eigenspaces.
    ///
    /// Characters are sorted by degree, then by their rounded values, with
    /// the trivial character first; the result does not depend on the seed.
    pub fn compute(group: &FiniteGroup, seed: u64) -> Result<Self> {
        let n = group.order();
        let classes = group.conjugacy_classes();
        for attempt in 0..MAX_RETRIES {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
            // c_{h⁻¹} = conj(c_h) makes X Hermitian.
            let mut coeff = vec![ZERO; n];
            for h in 0..n {
                let hi = group.inv(h);
                if hi < h {
                    continue;
                }
                let z = linalg::random_complex(&mut rng);
                if hi == h {
                    coeff[h] = Complex64::new(z.re, 0.0);
                } else {
                    coeff[h] = z;
                    coeff[hi] = z.conj();
                }
            }
            // Right multiplication commutes with the left-regular action:
            // X[a, b] = c_{a⁻¹ b}.
            let x = CMat::from_fn(n, n, |a, b| coeff[group.mul(group.inv(a), b)]);
            let (values, vectors) = linalg::hermitian_eigen(&x);
            let mut characters: Vec<ClassFunction> = Vec::new();
            let mut ok = true;
            for cluster in linalg::cluster_sorted(&values, EIGEN_GAP) {
                let space = vectors.select_columns(&cluster);
                let chi = ClassFunction::new(
                    classes
                        .iter()
                        .map(|class| {
                            let g = class[0];
                            let mut t = ZERO;
                            for xi in 0..n {
                                let gx = group.mul(g, xi);
                                for col in 0..space.ncols() {
                                    t += space[(gx, col)].conj() * space[(xi, col)];
                                }
                            }
                            t
                        })
                        .collect(),
                );
                let norm = inner_product(group, &chi, &chi);
                if (norm - Complex64::new(1.0, 0.0)).norm() > ROUNDING_TOL {
                    ok = false;
                    break;
                }
                if !characters.iter().any(|c| c.approx_eq(&chi, ROUNDING_TOL)) {
                    characters.push(chi);
                }
            }
            let degree_sum: f64 = characters.iter().map(|c| c.degree() * c.degree()).sum();
            if !ok
                || characters.len() != classes.len()
                || (degree_sum - n as f64).abs() > ROUNDING_TOL
            {
                continue;
            }
            characters.sort_by_key(sort_key);
            return Ok(CharacterTable { characters });
        }
        Err(Error::ToleranceFailure(format!(
            "character table splitting failed after {MAX_RETRIES} attempts"
        )))
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.characters
            .iter()
            .map(|c| c.degree().round() as usize)
            .collect()
    }

    /// Index of the irreducible character matching `chi`, if any.
    pub fn find(&self, chi: &ClassFunction, tol: f64) -> Option<usize> {
        self.characters.iter().position(|c| c.approx_eq(chi, tol))
    }
}

fn sort_key(chi: &ClassFunction) -> (i64, bool, Vec<(i64, i64)>) {
    let q = |x: f64| (x * 1e6).round() as i64;
    let trivial = chi
        .values
        .iter()
        .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    (
        q(chi.degree()),
        !trivial,
        chi.values.iter().map(|v| (-q(v.re), -q(v.im))).collect(),
    )
}
