use sosq_core::*;
use std::time::Instant;

fn main() {
    let spec = CorpusSpec {
        count: 2000,
        degree_max: 8,
        coeff_bits: 16,
        seed: 424242,
        families: vec![
            Family::TwoSquares,
            Family::FourSquares,
            Family::QuadraticProducts,
            Family::LevelFourQuadratics,
        ],
    };
    let corpus = corpus_generate(&spec);
    let cfg = DecomposeConfig { seed: 11, ..DecomposeConfig::default() };
    let t = Instant::now();
    let mut caps = 0;
    for (i, (fam, f)) in corpus.iter().enumerate() {
        let started = Instant::now();
        match decompose(f, Mode::Experimental5, &cfg) {
            Ok(cert) => { assert!(verify(&cert)); }
            Err(PipelineError::IterationCap(_)) => { caps += 1; println!("cap #{i} {f}"); }
            Err(e) => { println!("FAIL #{i} {fam:?} {f}: {e}"); }
        }
        let el = started.elapsed();
        if el.as_millis() > 2000 {
            println!("slow #{i} {fam:?} deg {} h {}: {:?}", f.deg(), f.height_bits(), el);
        }
        if i % 400 == 0 { println!("... {i} at {:?}", t.elapsed()); }
    }
    println!("experimental5 on 2000: {:?}, caps {caps}", t.elapsed());
}
