//! Library results against the integer oracles in `common`.

mod common;

use common::*;
use iwasawa::gamma_tools::{gamma_coinvariants, ZpGammaModule};
use iwasawa::iwasawa_ring::{IntPoly, RingAutomorphism};
use iwasawa::module_theory::{coinvariants, ModulePresentation, PolyMatrix};
use iwasawa::padic_linalg::{certified_cokernel, escalate_and_retry, FiniteZpModule, PAdicContext, ZpMatrix};
use iwasawa::tower_sim::{sweep, SemidirectModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p, 20, 4).unwrap()
}

fn structure(h: &FiniteZpModule) -> (Vec<u32>, usize) {
    (h.torsion_exponents().to_vec(), h.free_rank())
}

fn to_poly(f: &Terms, r: usize) -> IntPoly {
    f.iter()
        .fold(IntPoly::zero(r), |acc, (c, e)| acc.add(&IntPoly::monomial(r, e.clone(), *c)))
}

fn library_cokernel(rows: &[Vec<i64>], p: u64) -> FiniteZpModule {
    let build = |k: &PAdicContext| ZpMatrix::from_i64_rows(k, rows);
    escalate_and_retry(&ctx(p), |k| certified_cokernel(k, &build)).unwrap().value
}

#[test]
fn cokernels_of_fixed_matrices() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![9, 3, 0], vec![0, 6, 27], vec![2, 0, 1]],
        vec![vec![3, 0], vec![0, 0]],
        vec![vec![0, 0, 0]],
        vec![vec![27], vec![9], vec![3]],
        vec![vec![4, 2], vec![2, 1]],
        vec![vec![-3, 9, 27], vec![6, -18, 0]],
    ];
    for rows in &cases {
        let cols = rows[0].len();
        assert_eq!(structure(&library_cokernel(rows, 3)), cokernel_oracle(&int_matrix(rows), cols, 3), "{rows:?}");
    }
}

#[test]
fn cokernels_of_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [3u64, 5] {
        let bound = (p * p * p) as i64;
        for _ in 0..100 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let a: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
                .collect();
            assert_eq!(structure(&library_cokernel(&a, p)), cokernel_oracle(&int_matrix(&a), cols, p), "{a:?}");
        }
    }
}

fn t(c: i64, e: &[u32]) -> (i64, Vec<u32>) {
    (c, e.to_vec())
}

#[test]
fn cyclic_coinvariants_match_group_ring_oracle() {
    let p = 3;
    let univariate: Vec<Terms> = vec![
        vec![t(3, &[0])],
        vec![t(9, &[0])],
        vec![t(1, &[1])],
        vec![t(1, &[1]), t(-3, &[0])],
        vec![t(1, &[2]), t(3, &[0])],
        vec![t(3, &[1]), t(-9, &[0])],
        vec![t(1, &[2]), t(-6, &[1]), t(9, &[0])],
    ];
    for f in &univariate {
        let module = ModulePresentation::cyclic(to_poly(f, 1), 1, p).unwrap();
        for m in 0..=3 {
            let lib = coinvariants(&module, m, &ctx(p)).unwrap();
            assert_eq!(structure(&lib), cyclic_coinvariants_oracle(std::slice::from_ref(f), p, 1, m), "{f:?} m={m}");
        }
    }
    let bivariate: Vec<Terms> = vec![
        vec![t(3, &[0, 0])],
        vec![t(1, &[1, 0]), t(-3, &[0, 0])],
        vec![t(1, &[1, 1]), t(3, &[0, 0])],
        vec![t(3, &[0, 1])],
    ];
    for f in &bivariate {
        let module = ModulePresentation::cyclic(to_poly(f, 2), 1, p).unwrap();
        for m in 0..=2 {
            let lib = coinvariants(&module, m, &ctx(p)).unwrap();
            assert_eq!(structure(&lib), cyclic_coinvariants_oracle(std::slice::from_ref(f), p, 2, m), "{f:?} m={m}");
        }
    }
}

#[test]
fn koszul_coinvariants_match_group_ring_oracle() {
    let p = 3;
    let pairs: Vec<[Terms; 2]> = vec![
        [vec![t(1, &[1, 0])], vec![t(1, &[0, 1])]],
        [vec![t(1, &[1, 0])], vec![t(3, &[0, 0])]],
        [vec![t(1, &[1, 0]), t(-3, &[0, 0])], vec![t(1, &[0, 2]), t(3, &[0, 0])]],
    ];
    for [f, g] in &pairs {
        let module = ModulePresentation::koszul(2, vec![to_poly(f, 2), to_poly(g, 2)], p).unwrap();
        for m in 0..=2 {
            let lib = coinvariants(&module, m, &ctx(p)).unwrap();
            assert_eq!(
                structure(&lib),
                cyclic_coinvariants_oracle(&[f.clone(), g.clone()], p, 2, m),
                "{f:?}, {g:?} m={m}"
            );
        }
    }
}

#[test]
fn gamma_coinvariants_match_integer_oracle() {
    let p = 3;
    let fixtures: Vec<(usize, Vec<u32>, Vec<Vec<i64>>)> = vec![
        (1, vec![], vec![vec![4]]),
        (1, vec![1], vec![vec![4, 0], vec![0, 1]]),
        (2, vec![], vec![vec![1, -3], vec![1, 1]]),
        (2, vec![2], vec![vec![1, -3, 0], vec![1, 1, 0], vec![0, 0, 1]]),
        (1, vec![2], vec![vec![1, 0], vec![1, 4]]),
        (0, vec![1, 2], vec![vec![1, 0], vec![3, 1]]),
    ];
    for (k, torsion, gamma) in &fixtures {
        let m = ZpGammaModule::new(*k, torsion.clone(), gamma.clone(), p).unwrap();
        for n in 0..=4 {
            let lib = gamma_coinvariants(&m, n, &ctx(p)).unwrap();
            assert_eq!(structure(&lib), gamma_coinvariants_oracle(*k, torsion, gamma, p, n), "{gamma:?} n={n}");
        }
    }
}

#[test]
fn free_tower_matches_golden_table() {
    let p = 3;
    let x = SemidirectModule::new(
        ModulePresentation::free(1, 1, p).unwrap(),
        RingAutomorphism::scalar(1, 1 + p as i64, p).unwrap(),
        PolyMatrix::from_rows(1, vec![vec![IntPoly::one(1)]]).unwrap(),
    )
    .unwrap();
    let table = sweep(&x, 0..=3, 0..=3, &ctx(p)).unwrap();
    let lib: Vec<_> = table.records().iter().map(|c| (c.n, c.m, c.e, c.rank, c.certified)).collect();
    assert_eq!(lib, read_tower_csv(GOLDEN_TOWER));
}
