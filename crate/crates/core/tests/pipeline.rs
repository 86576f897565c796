use qschur::convalg::{closure_dimension, closure_dimension_weighted, extract_idempotents, ConvAlgebra, GeneratorSet};
use qschur::flagvar::{cache_path, enumerate_flags_type_a, enumerate_x, enumerate_x_cached, FlagKind, QuiverShape};
use qschur::reptheory::{nat_matrices_with_sum, pi_set, schur_dimension, top_dvec, CartanData};

const MAX_FLAGS: u64 = 1_000_000;
const MAX_BASIS: usize = 20_000;

fn algebra(m: usize, d: usize, q: u64) -> ConvAlgebra {
    ConvAlgebra::new(enumerate_x(QuiverShape::new(m).unwrap(), d, q, MAX_FLAGS).unwrap())
}

#[test]
fn graded_and_generic_closures_agree() {
    for (m, d, q) in [(1, 1, 2), (1, 1, 3), (2, 1, 2)] {
        let alg = algebra(m, d, q);
        let gens = GeneratorSet::build(&alg).unwrap();
        let generic = closure_dimension(&alg, &gens.all(), MAX_BASIS).unwrap();
        let graded = closure_dimension_weighted(&alg, MAX_BASIS).unwrap().dimension;
        assert_eq!(generic, graded, "m={m} d={d} q={q}");

        let cartan = CartanData::type_d(m);
        let pi = pi_set(&cartan, &top_dvec(cartan.rank(), m + 1, d as i64)).unwrap();
        assert_eq!(schur_dimension(&cartan, &pi).unwrap(), graded.into());
    }
}

#[test]
fn idempotents_cover_every_realized_weight() {
    let alg = algebra(1, 2, 2);
    let ext = extract_idempotents(&alg).unwrap();
    assert!(ext.mismatches.is_empty());
    assert_eq!(ext.reconstructed.len(), alg.flags().by_nu().len());
    let sum = ext.reconstructed.values().try_fold(alg.zero(), |acc, op| alg.add(&acc, op)).unwrap();
    assert_eq!(sum, alg.unit());
}

#[test]
fn type_a_closure_is_matrix_count() {
    for (n, d) in [(2, 1), (2, 2), (3, 1)] {
        let alg = ConvAlgebra::new(enumerate_flags_type_a(n - 1, d, 2, MAX_FLAGS).unwrap());
        let gens = GeneratorSet::build(&alg).unwrap();
        let dim = closure_dimension(&alg, &gens.all(), MAX_BASIS).unwrap();
        assert_eq!(dim as u64, nat_matrices_with_sum(n, d as u64), "n={n} d={d}");
    }
}

#[test]
fn flag_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let shape = QuiverShape::new(1).unwrap();
    let fresh = enumerate_x(shape, 2, 3, MAX_FLAGS).unwrap();
    let first = enumerate_x_cached(shape, 2, 3, MAX_FLAGS, Some(dir.path())).unwrap();
    let path = cache_path(dir.path(), FlagKind::RamifiedD { m: 1 }, 2, 3);
    assert!(path.exists());
    let second = enumerate_x_cached(shape, 2, 3, MAX_FLAGS, Some(dir.path())).unwrap();
    for set in [&first, &second] {
        assert_eq!(set.len(), fresh.len());
        assert!((0..fresh.len()).all(|i| set.slots(i) == fresh.slots(i)));
    }

    // A corrupt cache file is rebuilt rather than trusted.
    std::fs::write(&path, "not json").unwrap();
    let rebuilt = enumerate_x_cached(shape, 2, 3, MAX_FLAGS, Some(dir.path())).unwrap();
    assert_eq!(rebuilt.len(), fresh.len());
}
