use invalg::lie::{self, Family, HighestWeight, RootSystem};
use num_bigint::BigUint;

fn systems_up_to_rank_4() -> Vec<RootSystem> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(RootSystem::new(Family::A, n).unwrap());
    }
    for n in 2..=4 {
        out.push(RootSystem::new(Family::B, n).unwrap());
        out.push(RootSystem::new(Family::C, n).unwrap());
    }
    for n in 3..=4 {
        out.push(RootSystem::new(Family::D, n).unwrap());
    }
    out.push(RootSystem::new(Family::G2, 2).unwrap());
    out
}

fn weights(rank: usize, max: u64) -> Vec<HighestWeight> {
    let base = max + 1;
    (0..base.pow(rank as u32))
        .map(|k| HighestWeight::new((0..rank).map(|i| k / base.pow(i as u32) % base).collect()))
        .collect()
}

fn unit(rank: usize, i: usize, c: u64) -> HighestWeight {
    let mut v = vec![0; rank];
    v[i] = c;
    HighestWeight::new(v)
}

#[test]
fn weyl_dim_is_strictly_submultiplicative() {
    for sys in systems_up_to_rank_4() {
        let ws = weights(sys.rank, 3);
        let dims: Vec<BigUint> = ws.iter().map(|w| lie::weyl_dim(&sys, w).unwrap()).collect();
        for (i, l) in ws.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            for (j, m) in ws.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                let sum = lie::weyl_dim(&sys, &l.plus(m)).unwrap();
                assert!(
                    sum < &dims[i] * &dims[j],
                    "{sys}: {:?} + {:?}",
                    l.coords,
                    m.coords
                );
            }
        }
    }
}

#[test]
fn adjoint_representations_have_lie_algebra_dimension() {
    for sys in systems_up_to_rank_4() {
        let n = sys.rank as u64;
        let (weight, expected) = match sys.family {
            Family::A => {
                let mut v = vec![0; sys.rank];
                v[0] += 1;
                v[sys.rank - 1] += 1;
                (HighestWeight::new(v), n * (n + 2))
            }
            // ω2 of B2 is the spin module, so the adjoint weight there is 2ω2.
            Family::B => (
                unit(sys.rank, 1, if sys.rank == 2 { 2 } else { 1 }),
                n * (2 * n + 1),
            ),
            Family::C => (unit(sys.rank, 0, 2), n * (2 * n + 1)),
            Family::D => {
                // For D3 the adjoint weight is ω2 + ω3; from D4 on it is ω2.
                if sys.rank == 3 {
                    (HighestWeight::new(vec![0, 1, 1]), 15)
                } else {
                    (unit(sys.rank, 1, 1), n * (2 * n - 1))
                }
            }
            Family::G2 => (unit(2, 1, 1), 14),
        };
        assert_eq!(
            lie::weyl_dim(&sys, &weight).unwrap(),
            BigUint::from(expected),
            "{sys}"
        );
    }
}

#[test]
fn type_a_fundamental_weights_give_exterior_powers() {
    for n in 1..=8usize {
        let sys = RootSystem::new(Family::A, n).unwrap();
        let mut binom = 1u64;
        for k in 1..=n {
            binom = binom * (n + 1 - k + 1) as u64 / k as u64;
            assert_eq!(
                lie::weyl_dim(&sys, &unit(n, k - 1, 1)).unwrap(),
                BigUint::from(binom),
                "A{n} ω{k}"
            );
        }
        // The dual module reverses the Dynkin labels.
        for w in weights(n.min(3), 2) {
            let mut coords = w.coords.clone();
            coords.resize(n, 0);
            let mut rev = coords.clone();
            rev.reverse();
            let (a, b) = (HighestWeight::new(coords), HighestWeight::new(rev));
            assert_eq!(
                lie::weyl_dim(&sys, &a).unwrap(),
                lie::weyl_dim(&sys, &b).unwrap()
            );
        }
    }
}

#[test]
fn etingof_duality_complements_dimensions() {
    let cases = [
        ("A1xA1", "[1];[1]"),
        ("A2xG2xB2", "[1,0];[0,1];[1,1]"),
        ("A1xA3xC2", "[2];[0,0,0];[0,1]"),
        ("D4xA1", "[1,0,0,0];[3]"),
    ];
    for (types, ws) in cases {
        let cls = lie::etingof_enumerate(&lie::parse_factors(types, ws).unwrap()).unwrap();
        let full: BigUint = cls.factor_dims.iter().product();
        let square = &full * &full;
        assert_eq!(cls.subalgebras.len(), 1 << cls.nontrivial.len(), "{types}");
        assert_eq!(
            cls.total,
            BigUint::from(cls.subalgebras.len() + 1),
            "{types}"
        );
        for s in &cls.subalgebras {
            let dual = &cls.subalgebras[s.dual];
            assert_eq!(&s.dim * &dual.dim, square, "{types}");
            assert!(s.subset.iter().all(|i| !dual.subset.contains(i)));
        }
    }
}

#[test]
fn large_weights_use_exact_arithmetic() {
    let sys = RootSystem::new(Family::A, 8).unwrap();
    let w = HighestWeight::new(vec![1000; 8]);
    // For λ = kρ the dimension is (k + 1)^{#positive roots}.
    let expected = BigUint::from(1001u32).pow(36);
    assert_eq!(lie::weyl_dim(&sys, &w).unwrap(), expected);
}
