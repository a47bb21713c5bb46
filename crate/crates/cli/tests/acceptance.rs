//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use invalg::classify::{self, Enumeration};
use invalg::ideals::{self, Side};
use invalg::lie::{self, Family, HighestWeight, RootSystem};
use invalg::linalg::{self, CMat};
use invalg::matalg;
use invalg::rep::Representation;
use invalg::subspace::MatrixSubspace;
use invalg::{catalog, factor, lift};
use serde_json::Value;

const TOL: f64 = 1e-8;
const SUBSPACE_RES: f64 = 1e-6;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rep(key: &str) -> Representation {
    catalog::resolve(key).unwrap().1
}

fn run_cli(args: &[&str], threads: Option<&str>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_invalg"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, out) = run_cli(args, None);
    ensure(code == 0, || {
        format!("`invalg {}` exited with {code}", args.join(" "))
    })?;
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

/// Set equality with oracle, with subspace residuals under `SUBSPACE_RES`.
fn matches_oracle(v: &Representation, en: &Enumeration) -> Result<bool, String> {
    let (list, certified) = classify::oracle(v, TOL).map_err(|e| e.to_string())?;
    let close = |a: &MatrixSubspace, b: &MatrixSubspace| {
        a.dim() == b.dim()
            && a.containment_residual(b) < SUBSPACE_RES
            && b.containment_residual(a) < SUBSPACE_RES
    };
    let same = list.len() == en.len()
        && list
            .iter()
            .all(|o| en.subalgebras.iter().any(|b| close(&b.space, o)))
        && en
            .subalgebras
            .iter()
            .all(|b| list.iter().any(|o| close(&b.space, o)));
    Ok(certified && same)
}

fn enumerate(v: &Representation) -> Result<Enumeration, String> {
    classify::enumerate_invariant_subalgebras(v, 0, TOL).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let json = cli_json(&["subalgebras", "catalog:S3:std"])?;
    ensure(
        json["count"] == 3 && json["dims"] == serde_json::json!([1, 2, 4]),
        || format!("cli dims {}", json["dims"]),
    )?;
    let v = rep("catalog:S3:std");
    let en = enumerate(&v)?;
    ensure(en.dims() == [1, 2, 4], || format!("dims {:?}", en.dims()))?;
    let i = en
        .subalgebras
        .iter()
        .position(|b| b.dim() == 2)
        .ok_or("no dim-2 entry")?;
    let cartan = &en.subalgebras[i];
    ensure(cartan.component_dims == [1, 1], || {
        "dim-2 entry is not a Cartan".into()
    })?;
    ensure(
        matalg::centralizer(&cartan.space, TOL).approx_eq(&cartan.space, SUBSPACE_RES),
        || "Cartan not maximal".into(),
    )?;
    let datum = en.data[i]
        .as_ref()
        .ok_or("dim-2 entry has no induction datum")?;
    let pair = &en.pairs[datum.pair];
    ensure(pair.subgroup.order() == 3 && pair.w.dim() == 1, || {
        format!("datum subgroup order {}", pair.subgroup.order())
    })?;
    let g = v.group();
    let x = *pair
        .subgroup
        .members()
        .iter()
        .find(|&&x| x != g.identity())
        .unwrap();
    let w = pair.w.matrix(pair.subgroup.local_index(x).unwrap())[(0, 0)];
    ensure(
        (w - num_complex_one()).norm() > 0.5 && (w * w * w - num_complex_one()).norm() < 1e-8,
        || format!("W(x) = {w} is not a primitive cube root of unity"),
    )?;
    ensure(matches_oracle(&v, &en)?, || "oracle disagreement".into())?;
    Ok("dims [1, 2, 4]; Cartan from (C3, ω); oracle equal".into())
}

fn num_complex_one() -> num_complex::Complex64 {
    num_complex::Complex64::new(1.0, 0.0)
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for key in ["Q8", "D4"] {
        let v = rep(&format!("catalog:{key}:std"));
        let en = enumerate(&v)?;
        ensure(en.dims() == [1, 2, 2, 2, 4], || {
            format!("{key} dims {:?}", en.dims())
        })?;
        let cartans: Vec<&MatrixSubspace> = en
            .subalgebras
            .iter()
            .filter(|b| b.dim() == 2)
            .map(|b| &b.space)
            .collect();
        for (a, ca) in cartans.iter().enumerate() {
            let z = matalg::centralizer(ca, TOL);
            ensure(z.approx_eq(ca, SUBSPACE_RES), || {
                format!("{key}: Cartan {a} not self-dual")
            })?;
            for cb in &cartans[a + 1..] {
                ensure(!ca.approx_eq(cb, SUBSPACE_RES), || {
                    format!("{key}: repeated Cartan")
                })?;
            }
        }
        ensure(matches_oracle(&v, &en)?, || {
            format!("{key}: oracle disagreement")
        })?;
        notes.push(format!("{key} 5"));
    }
    Ok(format!(
        "{}; three distinct self-dual Cartans each",
        notes.join(", ")
    ))
}

fn criterion_3() -> Outcome {
    let v = rep("catalog:SL23:std");
    let en = enumerate(&v)?;
    ensure(en.dims() == [1, 4], || format!("dims {:?}", en.dims()))?;
    ensure(
        classify::is_primitive(&v, TOL).map_err(|e| e.to_string())?,
        || "not primitive".into(),
    )?;
    let (nonunital, _) = classify::nonunital_scan(&v, TOL).map_err(|e| e.to_string())?;
    ensure(nonunital.len() == 1 && nonunital[0].dim() == 0, || {
        format!(
            "nonunital dims {:?}",
            nonunital.iter().map(|s| s.dim()).collect::<Vec<_>>()
        )
    })?;
    ensure(matches_oracle(&v, &en)?, || "oracle disagreement".into())?;
    Ok("{C·I, M2}; nonunital scan gives only {0}".into())
}

fn criterion_4() -> Outcome {
    let v = rep("catalog:S3xS3:stdxstd");
    let adj = v
        .adjoint()
        .isotypic_decomposition(TOL)
        .map_err(|e| e.to_string())?;
    ensure(
        adj.len() == 9 && adj.iter().all(|c| c.multiplicity == 1),
        || format!("adjoint has {} components", adj.len()),
    )?;
    let en = enumerate(&v)?;
    let pair = en
        .subalgebras
        .iter()
        .filter(|b| b.dim() == 4 && factor::is_central_simple(&b.space, TOL))
        .find_map(|b| {
            let z = matalg::centralizer(&b.space, TOL);
            (z.dim() == 4 && en.position(&z).is_some()).then(|| b.space.clone())
        })
        .ok_or("no central simple (4, 4) dual pair")?;
    let f = factor::extract_factorization(&pair, &v, 0, TOL).map_err(|e| e.to_string())?;
    ensure((f.a_dim, f.b_dim) == (2, 2), || {
        format!("factor dims {:?}", (f.a_dim, f.b_dim))
    })?;
    let s = &f.basis_change;
    let s_inv = linalg::inverse(s).ok_or("singular basis change")?;
    let mut worst = 0.0f64;
    for g in 0..v.group().order() {
        let rebuilt = s * linalg::kron(f.sigma.matrix(g), f.tau.matrix(g)) * &s_inv * f.scalars[g];
        worst = worst.max(linalg::frob(&(v.matrix(g) - rebuilt)) / linalg::frob(v.matrix(g)));
    }
    ensure(worst < 1e-6, || {
        format!("reconstruction residual {worst:e}")
    })?;
    ensure(matches_oracle(&v, &en)?, || "oracle disagreement".into())?;
    Ok(format!(
        "{} subalgebras; (4, 4) pair; residual {worst:.1e} over 36 elements",
        en.len()
    ))
}

fn criterion_5() -> Outcome {
    let v = rep("catalog:S3:trivPlusSign");
    let left = ideals::invariant_ideals(&v, Side::Left, TOL).map_err(|e| e.to_string())?;
    let right = ideals::invariant_ideals(&v, Side::Right, TOL).map_err(|e| e.to_string())?;
    ensure(left.len() == 4 && right.len() == 4, || {
        format!("{} left, {} right", left.len(), right.len())
    })?;
    let json = cli_json(&["ideals", "catalog:S3:trivPlusSign"])?;
    ensure(json["left_count"] == 4 && json["right_count"] == 4, || {
        "cli counts differ".into()
    })?;
    let subs = ideals::invariant_subspaces(&v, TOL)
        .and_then(|s| s.into_finite())
        .map_err(|e| e.to_string())?;
    for l in &subs {
        let a = ideals::ann(l, TOL);
        let back =
            ideals::ideal_to_subspace(&a.space, Side::Left, TOL).map_err(|e| e.to_string())?;
        ensure(back.approx_eq(l, SUBSPACE_RES), || {
            "ann round trip failed".into()
        })?;
        let c = ideals::coann(l, TOL);
        let back =
            ideals::ideal_to_subspace(&c.space, Side::Right, TOL).map_err(|e| e.to_string())?;
        ensure(back.approx_eq(l, SUBSPACE_RES), || {
            "coann round trip failed".into()
        })?;
        for m in &subs {
            let (am, cm) = (ideals::ann(m, TOL), ideals::coann(m, TOL));
            let le = l.contains(m, SUBSPACE_RES);
            ensure(
                le == am.space.contains_subspace(&a.space, SUBSPACE_RES),
                || "ann does not reverse order".into(),
            )?;
            ensure(
                le == c.space.contains_subspace(&cm.space, SUBSPACE_RES),
                || "coann does not preserve order".into(),
            )?;
        }
    }
    for (m, key) in [
        (1, "catalog:S3:std"),
        (2, "catalog:S3:trivPlusSign"),
        (3, "catalog:S3:trivSignStd"),
    ] {
        let v = rep(key);
        let n = ideals::invariant_subspaces(&v, TOL)
            .and_then(|s| s.into_finite())
            .map_err(|e| e.to_string())?
            .len();
        let nl = ideals::invariant_ideals(&v, Side::Left, TOL)
            .map_err(|e| e.to_string())?
            .len();
        let nr = ideals::invariant_ideals(&v, Side::Right, TOL)
            .map_err(|e| e.to_string())?
            .len();
        ensure(n == 1 << m && nl == n && nr == n, || {
            format!("m = {m}: {n} subspaces, {nl} left, {nr} right")
        })?;
    }
    Ok("4 left + 4 right; round trips and order verified; 2^m for m = 1, 2, 3".into())
}

fn irreducible_catalog_reps() -> Vec<(String, Representation)> {
    let mut out = Vec::new();
    for key in catalog::KEYS {
        let e = catalog::entry(key).unwrap();
        for (name, r) in &e.reps {
            if invalg::rep::equivariant_hom_space(r, r, TOL).unwrap().len() == 1 {
                out.push((format!("{key}:{name}"), r.clone()));
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let (mut checked, mut inputs, mut algebras) = (0, 0, 0);
    for (name, v) in irreducible_catalog_reps() {
        let en = enumerate(&v).map_err(|e| format!("{name}: {e}"))?;
        ensure(en.complete, || format!("{name}: enumeration incomplete"))?;
        let report = classify::verify_classification(&v, &en, 0, TOL);
        ensure(report.passed(), || {
            format!("{name}: {}", report.violations.join("; "))
        })?;
        checked += report.checked;
        algebras += en.len();
        inputs += 1;
    }
    Ok(format!(
        "{inputs} irreducible inputs, {algebras} subalgebras, {checked} checks, 0 violations"
    ))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for (name, v) in irreducible_catalog_reps() {
        let action = v.adjoint();
        let lifted = lift::skolem_noether_lift(v.group().clone(), action.matrices(), 1e-10)
            .map_err(|e| format!("{name}: {e}"))?;
        let res = lift::lift_residual(action.matrices(), &lifted);
        ensure(res < 1e-8, || format!("{name}: lift residual {res:e}"))?;
        for g in 0..v.group().order() {
            ensure(
                lift::scalar_ratio(lifted.matrix(g), v.matrix(g), 1e-8).is_some(),
                || format!("{name}: ρ'({g}) not a multiple of ρ({g})"),
            )?;
        }
        count += 1;
    }
    let pauli = rep("catalog:V4:pauli");
    let lifted =
        lift::skolem_noether_lift(pauli.group().clone(), pauli.adjoint().matrices(), 1e-10)
            .map_err(|e| e.to_string())?;
    let (a, b) = (lifted.matrix(2), lifted.matrix(1));
    let comm: CMat = a * b * linalg::inverse(a).unwrap() * linalg::inverse(b).unwrap();
    let c =
        lift::scalar_ratio(&comm, &linalg::identity(2), 1e-10).ok_or("commutator is not scalar")?;
    ensure((c + num_complex_one()).norm() < 1e-10, || {
        format!("commutator scalar {c}")
    })?;
    Ok(format!(
        "{count} irreducible reps lifted; Pauli commutator scalar −1"
    ))
}

fn criterion_8() -> Outcome {
    let a1 = RootSystem::new(Family::A, 1).map_err(|e| e.to_string())?;
    for m in 0..=50u64 {
        let d = lie::weyl_dim(&a1, &HighestWeight::new(vec![m])).map_err(|e| e.to_string())?;
        ensure(d.to_string() == (m + 1).to_string(), || {
            format!("A1 ({m}) gives {d}")
        })?;
    }
    let a2 = RootSystem::new(Family::A, 2).map_err(|e| e.to_string())?;
    let d11 = lie::weyl_dim(&a2, &HighestWeight::new(vec![1, 1])).map_err(|e| e.to_string())?;
    let d20 = lie::weyl_dim(&a2, &HighestWeight::new(vec![2, 0])).map_err(|e| e.to_string())?;
    ensure(d11.to_string() == "8" && d20.to_string() == "6", || {
        format!("A2 gives {d11}, {d20}")
    })?;

    let mut systems = Vec::new();
    for n in 1..=4 {
        systems.push((Family::A, n));
    }
    for n in 2..=4 {
        systems.push((Family::B, n));
        systems.push((Family::C, n));
    }
    for n in 3..=4 {
        systems.push((Family::D, n));
    }
    systems.push((Family::G2, 2));
    let mut pairs = 0usize;
    for (family, n) in systems {
        let sys = RootSystem::new(family, n).map_err(|e| e.to_string())?;
        let weights: Vec<HighestWeight> = (0..4usize.pow(n as u32))
            .map(|k| {
                HighestWeight::new(
                    (0..n)
                        .map(|i| (k / 4usize.pow(i as u32) % 4) as u64)
                        .collect(),
                )
            })
            .collect();
        for l in &weights {
            for m in &weights {
                let irr = lie::tensor_irreducible(&sys, l, m).map_err(|e| format!("{sys}: {e}"))?;
                ensure(irr == (l.is_zero() || m.is_zero()), || {
                    format!("{sys}: {:?} ⊗ {:?}", l.coords, m.coords)
                })?;
                pairs += 1;
            }
        }
    }
    let cls =
        lie::etingof_enumerate(&lie::parse_factors("A1xA1", "[1];[1]").map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure(
        cls.subalgebras.len() == 4 && cls.total.to_string() == "5",
        || {
            format!(
                "A1xA1: {} subalgebras, total {}",
                cls.subalgebras.len(),
                cls.total
            )
        },
    )?;
    let json = cli_json(&["lie", "--type", "A1xA1", "--weights", "[1];[1]"])?;
    ensure(json["count"] == 4 && json["total"] == "5", || {
        "cli lie output differs".into()
    })?;
    Ok(format!(
        "Weyl dimensions ok; {pairs} tensor pairs; A1xA1 gives 4 + 1 = 5"
    ))
}

fn criterion_9() -> Outcome {
    let dir = std::env::temp_dir().join(format!("invalg-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let input = dir.join("s3std.json");
    let text = serde_json::to_string(&invalg::json::input_to_json(&rep("catalog:S3:std"))).unwrap();
    std::fs::write(&input, text).map_err(|e| e.to_string())?;
    let input = input.to_str().unwrap().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", "catalog:S3:std"],
        vec!["validate", "catalog:V4:pauli"],
        vec!["ideals", "catalog:S3:trivPlusSign"],
        vec!["ideals", "catalog:S3:trivSignStd", "--side", "left"],
        vec!["subalgebras", "catalog:S3:std"],
        vec!["subalgebras", "--verify", "catalog:S3xS3:stdxstd"],
        vec!["subalgebras", "catalog:V4:pauli", "--seed", "7"],
        vec!["subalgebras", &input],
        vec!["factor", "catalog:S3xS3:stdxstd"],
        vec!["factor", "catalog:Q8:std", "--tol", "1e-9"],
        vec!["lie", "--type", "A1xA1", "--weights", "[1];[1]"],
        vec!["lie", "--type", "G2xB3", "--weights", "[1,0];[0,0,1]"],
        vec!["catalog"],
        vec!["catalog", "--export", "all"],
    ];
    for args in &commands {
        let first = run_cli(args, None);
        let second = run_cli(args, None);
        let serial = run_cli(args, Some("1"));
        ensure(first.0 == 0, || {
            format!("`invalg {}` exited with {}", args.join(" "), first.0)
        })?;
        ensure(first == second && first == serial, || {
            format!("`invalg {}` output differs between runs", args.join(" "))
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} commands byte-identical across 3 runs (incl. single-threaded)",
        commands.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("S3 standard: 3 subalgebras", criterion_1),
        ("Q8 and D4: 5 subalgebras", criterion_2),
        ("SL(2,3) primitive", criterion_3),
        ("S3xS3 dual pair and factorization", criterion_4),
        ("ideal lattice", criterion_5),
        ("structural property suite", criterion_6),
        ("Skolem-Noether round trip", criterion_7),
        ("Lie invariants", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
