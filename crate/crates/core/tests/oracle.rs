//! Fixed-point characters against the brute-force PBW filtration.

use degflag_core::characters::{abl_character_eval, abl_character_exact, DominantWeight};
use degflag_core::linalg::{q, Q};
use degflag_core::pbw::{graded_character, schur_character, weyl_dimension};
use degflag_core::Error;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn all_lambdas(n: usize, max: u32) -> Vec<DominantWeight> {
    let mut out = vec![vec![]];
    for _ in 1..n {
        out = out.into_iter().flat_map(|v: Vec<u32>| (0..=max).map(move |l| [v.clone(), vec![l]].concat())).collect();
    }
    out.into_iter().map(|l| DominantWeight::new(n, l).unwrap()).collect()
}

#[test]
fn exact_character_equals_oracle() {
    let cases: Vec<DominantWeight> = (2..=4).flat_map(|n| all_lambdas(n, 2)).collect();
    assert_eq!(cases.len(), 3 + 9 + 27);
    cases.par_iter().for_each(|l| {
        let abl = abl_character_exact(l.n(), l).unwrap();
        let oracle = graded_character(l).unwrap();
        assert_eq!(abl, oracle.to_qcharacter(), "lambda={:?}", l.ell);
        assert_eq!(BigInt::from(abl.dimension()), weyl_dimension(l));
        assert_eq!(oracle.at_q1(), schur_character(l));
    });
}

#[test]
fn n5_fundamentals_exact_and_evaluated() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..5 {
        let l = DominantWeight::fundamental(5, d).unwrap();
        let oracle = graded_character(&l).unwrap();
        assert_eq!(abl_character_exact(5, &l).unwrap(), oracle.to_qcharacter());
        let mut done = 0;
        while done < 5 {
            let z: Vec<Q> = (0..4).map(|_| q(rng.random_range(2..12))).collect();
            let qv = q(rng.random_range(2..12));
            match abl_character_eval(5, &l, &z, &qv) {
                Ok(v) => assert_eq!(v, oracle.eval(&z, &qv)),
                Err(Error::VanishingDenominator) => continue,
                Err(e) => panic!("{e}"),
            }
            done += 1;
        }
    }
}
