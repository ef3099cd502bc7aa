use std::time::Instant;

use ccf_core::algorithms::AlgorithmSpec;
use ccf_core::corpus::{generate, CorpusSpec};
use ccf_core::exact_surd::nearest_points_of_surd;
use ccf_core::cf_core::SurdExpander;

#[test]
#[ignore]
fn profile_phases() {
    let spec = CorpusSpec { count: 3, coeff_bound: 6, seed: 7, ..Default::default() };
    let ctxs = generate(&spec);
    let alg = AlgorithmSpec::nearest(spec.ring);
    for ctx in &ctxs {
        let t = Instant::now();
        let mut ex = SurdExpander::new(ctx, alg.clone());
        ex.check_identities = false;
        let mut digit_time = std::time::Duration::ZERO;
        let mut steps = 0;
        for _ in 0..60 {
            let td = Instant::now();
            let z = ex.current_z().clone();
            let _ = nearest_points_of_surd(&z, spec.ring);
            digit_time += td.elapsed();
            if ex.step().is_err() { break; }
            steps += 1;
        }
        let no_id = t.elapsed();
        let t = Instant::now();
        let mut ex = SurdExpander::new(ctx, alg.clone());
        ex.check_identities = true;
        for _ in 0..60 {
            if ex.step().is_err() { break; }
        }
        let with_id = t.elapsed();
        eprintln!(
            "surd: steps={steps} no_id={:?} (digits alone {:?}) with_id={:?}",
            no_id, digit_time, with_id
        );
    }
}
